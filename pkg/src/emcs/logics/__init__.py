"""Pluggable context logics."""
from .el import And, Bottom, ElLogic, Name, Nominal, Some, Sub, Top, acc_el, equiv
from .programs import (
    DatalogLogic,
    NormalLogic,
    ObservationLogic,
    Reduct,
    Rule,
    acc_datalog,
    acc_normal_lp,
    acc_observation,
    gl_reduct,
    least_model,
    program,
    well_founded,
)

LOGICS = {
    "observation": ObservationLogic,
    "datalog": DatalogLogic,
    "normal-lp": NormalLogic,
    "el": ElLogic,
}

__all__ = [
    "And", "Bottom", "ElLogic", "Name", "Nominal", "Some", "Sub", "Top", "acc_el", "equiv",
    "DatalogLogic", "NormalLogic", "ObservationLogic", "Reduct", "Rule", "acc_datalog",
    "acc_normal_lp", "acc_observation", "gl_reduct", "least_model", "program", "well_founded",
    "LOGICS",
]
