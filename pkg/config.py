import os

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return default if value in (None, "") else int(value)


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return default if value in (None, "") else float(value)


LOG_LEVEL = os.getenv("COVERING_LOG_LEVEL", "WARNING")

# Project base directory (the repository root)
BASE_DIR = os.path.dirname(__file__)

# Directories and paths
DATA_DIR = os.path.join(BASE_DIR, "data")
KERNELS_DIR = os.path.join(DATA_DIR, "kernels")

# Output formatting
SIGNIFICANT_DIGITS = _env_int("COVERING_SIGNIFICANT_DIGITS", 12)

# Exact spectral integers above this ceiling raise SpectralOverflow
INT_LIMIT = _env_int("COVERING_INT_LIMIT", 2**62)

# Search and scan ceilings for the bounds
LEVEL_LIMIT = _env_int("COVERING_LEVEL_LIMIT", 10**7)
GEOMETRIC_M_MAX = _env_int("COVERING_GEOMETRIC_M_MAX", 10**6)
POWER_M_MAX = _env_int("COVERING_POWER_M_MAX", 10**7)
CERTIFY_K_MAX = _env_int("COVERING_CERTIFY_K_MAX", 200)

# Numerical defaults
KERNEL_TOL = _env_float("COVERING_KERNEL_TOL", 1e-12)
QUADRATURE_NODES = _env_int("COVERING_QUADRATURE_NODES", 512)

# Defaults for empirical runs
DEFAULT_SEED = _env_int("COVERING_SEED", 42)
DEFAULT_AMBIENT_POINTS = _env_int("COVERING_AMBIENT_POINTS", 512)
DEFAULT_BALL_DRAWS = _env_int("COVERING_BALL_DRAWS", 2000)
# Largest feature dimension dim V_m an empirical run will build
EMPIRICAL_MAX_DIM = _env_int("COVERING_EMPIRICAL_MAX_DIM", 4096)

# Defaults for the eps grid
DEFAULT_EPS_MIN = _env_float("COVERING_EPS_MIN", 1e-6)
DEFAULT_EPS_MAX = _env_float("COVERING_EPS_MAX", 0.5)
DEFAULT_EPS_COUNT = _env_int("COVERING_EPS_COUNT", 40)
