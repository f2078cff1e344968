"""Constants shared verbatim by the numba and numpy kernel sets."""

import numpy as np

# SplitMix64 generator (Steele, Lea & Flood 2014).
GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_MUL_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_MUL_2 = np.uint64(0x94D049BB133111EB)
# Odd multiplier spreading run indices before the avalanche mix.
RUN_STRIDE = np.uint64(0xD1B54A32D192ED03)
TWO_POW_M53 = 1.0 / 9007199254740992.0

# Tetrachoric search bracket and tolerance.
RHO_CLAMP = 0.999
BISECT_TOL = 1e-8

# Gauss-Legendre rule on [-1, 1] used for the bivariate normal integral,
# applied on PANELS equal sub-intervals of [0, asin(rho)].
GL_ORDER = 32
GL_PANELS = 4
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# Wichura (1988) AS 241 PPND16 coefficients.
AS241_A = np.array([3.387132872796366608, 133.14166789178437745, 1971.5909503065514427,
                    13731.693765509461125, 45921.953931549871457, 67265.770927008700853,
                    33430.575583588128105, 2509.0809287301226727])
AS241_B = np.array([1.0, 42.313330701600911252, 687.1870074920579083, 5394.1960214247511077,
                    21213.794301586595867, 39307.89580009271061, 28729.085735721942674,
                    5226.495278852545925])
AS241_C = np.array([1.42343711074968357734, 4.6303378461565452959, 5.7694972214606914055,
                    3.64784832476320460504, 1.27045825245236838258, 0.24178072517745061177,
                    0.0227238449892691845833, 7.7454501427834140764e-4])
AS241_D = np.array([1.0, 2.05319162663775882187, 1.6763848301838038494, 0.68976733498510000455,
                    0.14810397642748007459, 0.0151986665636164571966, 5.475938084995344946e-4,
                    1.05075007164441684324e-9])
AS241_E = np.array([6.6579046435011037772, 5.4637849111641143699, 1.7848265399172913358,
                    0.29656057182850489123, 0.026532189526576123093, 0.0012426609473880784386,
                    2.71155556874348757815e-5, 2.01033439929228813265e-7])
AS241_F = np.array([1.0, 0.59983220655588793769, 0.13692988092273580531, 0.0148753612908506148525,
                    7.868691311456132591e-4, 1.8463183175100546818e-5, 1.4215117583164458887e-7,
                    2.04426310338993978564e-15])
