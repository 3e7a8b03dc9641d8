"""Numeric tables shared by both kernel backends."""

import numpy as np

# Taylor coefficients of log Gamma(1 + e), e^1 .. e^45.
LGAMMA1P_COEF = np.array([
    -0.577215664901532860607,
    0.822467033424113218236,
    -0.400685634386531428467,
    0.270580808427784547879,
    -0.207385551028673985266,
    0.169557176997408189952,
    -0.14404989676884611812,
    0.125509669524743042422,
    -0.111334265869564690491,
    0.100099457512781808534,
    -0.0909540171458290422326,
    0.0833538405461090040249,
    -0.0769325164113521914728,
    0.0714329462953613360592,
    -0.0666687058824204680329,
    0.062500955141213040742,
    -0.058823978658684582339,
    0.0555557676274036111022,
    -0.0526316793796166607336,
    0.0500000476981016936398,
    -0.0476190703301422279908,
    0.0454545562932046694424,
    -0.0434782660530402593614,
    0.0416666691503412104691,
    -0.0400000011921401405861,
    0.0384615390346751857063,
    -0.0370370373129893255495,
    0.0357142858473333580282,
    -0.0344827586849193008108,
    0.0333333333643775810807,
    -0.0322580645311504163388,
    0.0312500000072759744802,
    -0.0303030303065580455069,
    0.0294117647075943447317,
    -0.0285714285722601100127,
    0.0277777777781819978303,
    -0.0270270270272236745901,
    0.0263157894737799468302,
    -0.0256410256410722817859,
    0.0250000000000227373696,
    -0.0243902439024501157897,
    0.023809523809529223183,
    -0.023255813953491015973,
    0.0227272727272740191686,
    -0.0222222222222228538158,
])

# Stirling correction B_2k / (2k (2k - 1)), k = 1..8.
STIRLING_COEF = np.array([
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
])

# Asymptotic digamma correction B_2k / (2k), k = 1..7.
DIGAMMA_COEF = np.array([
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
])

HALF_LOG_2PI = 0.91893853320467274178
EULER_GAMMA = 0.57721566490153286061

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (positive half, centre last).
GK15_NODES = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
GK15_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
GK15_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
