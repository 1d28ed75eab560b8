from os import getenv
from pathlib import Path
from tomllib import load

from dotenv import find_dotenv, load_dotenv

load_dotenv(find_dotenv(usecwd=True))


class EnvironmentVariables:
    def __getattribute__(self, item) -> str | None:
        return getenv(item)


with open(Path(__file__).parent.parent.joinpath("pyproject.toml"), "rb") as _f:
    pyproject = load(_f)
env = EnvironmentVariables()

TITLE = pyproject["project"]["name"]
VERSION = pyproject["project"]["version"]
DESCRIPTION = pyproject["project"]["description"]

LOG_LEVEL = env.GRAMSTAB_LOG_LEVEL or "WARNING"
WORKERS = int(env.GRAMSTAB_WORKERS or 1)

# Verdicts
VERDICT_RELATIVE_TOLERANCE = 1e-12
GRAM_CERTIFICATE_TOLERANCE = 1e-12  # times the Hadamard bound of the Gram matrix
DEFAULT_MAX_GRAM_SIZE = 3

# Power sums and characteristic polynomials
POWER_SUM_IMAGINARY_RESIDUE = 1e-8
TRACE_AGREEMENT_WARN = 1e-10
TRACE_AGREEMENT_FAIL = 1e-6
CHAR_POLY_NEWTON_CHECK = 1e-8
CHAR_POLY_MAX_SIZE = 64
GYRO_MAX_SIZE = 32
ODD_COEFFICIENT_TOLERANCE = 1e-9
GYRO_IDENTITY_CHECK = 1e-8

# Mechanical systems
SYMMETRY_ACCEPTANCE = 1e-9
ZERO_BLOCK_TOLERANCE = 1e-10
MASS_PIVOT_TOLERANCE = 1e-12

# Spectral oracle
ROOT_RESIDUAL_TOLERANCE = 1e-8
ROOT_SWEEP_BUDGET = 200
ROOT_POLISH_STEPS = 3
ROOT_CLUSTER_FACTOR = 10.0  # times eps^(1/m) for an m-fold root
CONJUGATE_PAIR_TOLERANCE = 1e-6
IMAGINARY_THRESHOLD = 1e-7
POSITIVE_REAL_THRESHOLD = 1e-8

# Sweeps
CLOSED_FORM_BAND = 1e-6
DEFAULT_SWEEP_RANGE = (-3.0, 3.0)
DEFAULT_SWEEP_RESOLUTION = 401
