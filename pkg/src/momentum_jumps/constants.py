"""Fixed physical constants (CODATA 2018, SI) and I/O unit factors."""

HBAR = 1.054571817e-34  # J s
E_CHARGE = 1.602176634e-19  # C
M0 = 9.1093837015e-31  # kg

# I/O boundary conversions; everything internal is SI.
MEV = 1e-3 * E_CHARGE  # J per meV
NM = 1e-9  # m per nm
UM = 1e-6  # m per um
