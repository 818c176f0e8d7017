from __future__ import annotations

import math

from core.bounds import gaussian_upper_constant
from core.errors import SchemaError
from core.kernels import GaussianSphereModel, coefficient, gaussian_coefficient
from core.session_helpers import RunConfig
from persistence.file_handler import write_json


def run_gaussian(config: RunConfig) -> None:
    """Write the Gaussian eigenvalues lambda_k, the coefficients a_k and the upper constant.

    upper_constant is null when rho^2 <= 2.
    """
    spec = config.load_kernel()
    if not isinstance(spec.model, GaussianSphereModel):
        raise SchemaError("model.type", "gaussian needs a gaussian_sphere kernel")
    rho, d = spec.model.rho, spec.manifold.d
    table = [
        {"k": k, "lambda_k": gaussian_coefficient(rho, d, k), "a_k": coefficient(spec, k)}
        for k in range(config.k_max + 1)
    ]
    upper = gaussian_upper_constant(rho, d) if rho > math.sqrt(2.0) else None
    write_json({"rho": rho, "d": d, "upper_constant": upper, "table": table}, config.out_path)
