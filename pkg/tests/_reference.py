"""Frozen reference values for the regression tests.

Every number here was produced by an independent high-precision route
(mpmath series and rotated-ray quadrature, see tools/make_reference_values.py)
before the fast implementations existed, and is kept verbatim so the tests
pin behavior rather than echo it.
"""

from fractions import Fraction

# y -> (Ai, Ai', Bi, Bi'), spanning the anchor table and the far field
AIRY_POINTS = {
    -200.0: (0.14889394248381025, -0.26000664543340602,
             0.018398406342617793, 2.1057013672897854),
    -100.0: (0.17675339323955288, -0.24229703166058381,
             0.024273887680160132, 1.7675948932340609),
    -50.0: (-0.16188142361232092, 0.96898983727674909,
            -0.13715015212882007, -1.1453617002654776),
    -12.5: (-0.27627456138116025, -0.41933133041950516,
            0.11703336725739278, -0.97451653616717407),
    -10.0: (0.040241238486443191, 0.99626504413279006,
            -0.31467982964383863, 0.11941411339990924),
    -5.0: (0.35076100902411432, 0.32719281855444314,
           -0.13836913490160058, 0.77841177300189925),
    -1.0: (0.53556088329235212, -0.010160567116645209,
           0.10399738949694461, 0.59237562642279235),
    0.0: (0.35502805388781724, -0.25881940379280680,
          0.61492662744600074, 0.44828835735382636),
    1.0: (0.13529241631288142, -0.15914744129679321,
          1.2074235949528713, 0.93243593339277563),
    5.0: (0.00010834442813607442, -0.00024741389086846248,
          657.79204417117118, 1435.8190802179825),
    12.0: (1.3931846888753608e-13, -4.8547365549853085e-13,
           329807225829.07418, 1135507502443.3707),
    20.0: (1.6916728686705403e-27, -7.5863916257483550e-27,
           2.1037650496511038e+25, 9.3818393361339643e+25),
    50.0: (4.5849417240748285e-104, -3.2443318198287993e-103,
           4.9090996994442193e+101, 3.4687987795459767e+102),
    80.0: (6.3679973255971629e-209, -5.6976982248324836e-208,
           2.7942959310392479e+206, 2.4984202786153257e+207),
}

# deep in the oscillatory range, near the lower end of the working window
AIRY_DEEP = {-1000.0: (0.055971895773073529, -0.08326457411704459)}

# (n, y) -> A_n(y); order one reduces to Ai
GEN_AIRY_ANCHORS = {
    (1, -10.0): 0.040241238486443190,
    (1, -5.0): 0.35076100902411433,
    (1, -1.0): 0.53556088329235207,
    (1, 2.0): 0.034924130423274378,
    (1, 4.0): 0.00095156385120480184,
    (1, 12.0): 1.3931846888753607e-13,
    (1, 16.0): 4.1568888289170244e-20,
    (2, -8.0): -0.14142936414183749,
    (2, -5.0): -0.024218533146302575,
    (2, -1.0): 0.41410898909449140,
    (2, 2.0): 0.0096218313391890856,
    (2, 3.0): 4.1207721942491147e-5,
    (2, 6.0): 4.8590809091557561e-22,
    (2, 10.0): 6.0903800788531722e-75,
    (3, -3.0): -0.17022862542976011,
    (3, -1.0): 0.50038346962628422,
    (3, 1.0): 0.14614167180134977,
    (4, -2.0): -0.32475000511147628,
    (5, -1.5): -0.40187461768777660,
    (6, -2.0): 0.26415469386483403,
}

GEN_AIRY_ZERO = {
    1: 0.35502805388781722,
    2: 0.38350670167783940,
    3: 0.38332375019390807,
    4: 0.37893316688345968,
    5: 0.37421275399414788,
    6: 0.36992614859179312,
}

# c_n = integral of (1 - t^2)^n over [0, 1]
C_N = {
    1: Fraction(2, 3),
    2: Fraction(8, 15),
    3: Fraction(16, 35),
    4: Fraction(128, 315),
    5: Fraction(256, 693),
    6: Fraction(1024, 3003),
}

# kappa_n at lambda = 0 for the shipped models; the sign carries the sign
# of the potential-difference coefficient through the signed odd root
KAPPA_ZERO = {
    1: -1.9873340530170587,
    2: 2.4096436731871055,
    3: -2.4084941551113412,
}

# |Im z| for the contact2 model at E = 0, h = 1e-4
WIDTH_EXAMPLE_H = 1e-4
WIDTH_EXAMPLE = 4.6425413339731786e-6
