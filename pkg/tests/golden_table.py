"""The eight universal spin^c Wu classes, transcribed term by term."""

from fractions import Fraction as F

SPINC_TABLE = {
    1: {"c": F(-1)},
    2: {"c^2": F(1, 2), "p1": F(1, 2)},
    3: {"c^3": F(1, 2), "c p1": F(-1, 2)},
    4: {"c^4": F(-5, 8), "c^2 p1": F(1, 4), "p1^2": F(11, 8), "p2": F(-5, 2)},
    5: {"c^5": F(9, 8), "c^3 p1": F(1, 4), "c p1^2": F(-11, 8), "c p2": F(5, 2)},
    6: {"c^6": F(-11, 16), "c^4 p1": F(-5, 16), "c^2 p1^2": F(11, 16), "p1^3": F(5, 16),
        "c^2 p2": F(-5, 4), "p1 p2": F(-1, 4), "p3": F(-1)},
    7: {"c^7": F(-15, 16), "c^5 p1": F(9, 16), "c^3 p1^2": F(11, 16), "c p1^3": F(-5, 16),
        "c^3 p2": F(-5, 4), "c p1 p2": F(1, 4), "c p3": F(1)},
    8: {"c^8": F(211, 128), "c^6 p1": F(-11, 32), "c^4 p1^2": F(-55, 64), "c^2 p1^3": F(5, 32),
        "p1^4": F(51, 128), "c^4 p2": F(25, 16), "c^2 p1 p2": F(-1, 8), "p1^2 p2": F(-23, 16),
        "p2^2": F(19, 8), "c^2 p3": F(-1, 2), "p1 p3": F(-2), "p4": F(3, 2)},
}
