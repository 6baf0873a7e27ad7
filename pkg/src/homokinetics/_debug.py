import os


def _debug_flag_enabled(flag: str, default: bool = False) -> bool:
    flag_value = os.getenv(flag)
    if flag_value is None:
        return default
    else:
        return flag_value == "1" or flag_value.lower() == "true"


def _load_log_steps() -> bool:
    return _debug_flag_enabled("HOMOKINETICS_LOG_STEPS", default=False)


def _load_log_quadrature() -> bool:
    return _debug_flag_enabled("HOMOKINETICS_LOG_QUADRATURE", default=True)


LOG_STEPS = _load_log_steps()
"""Every collision substep is logged at DEBUG when this flag is set. Off by default, since long runs take
millions of substeps.
"""

LOG_QUADRATURE = _load_log_quadrature()
"""Each quadrature budget doubling of the operator assembly is logged at DEBUG."""
