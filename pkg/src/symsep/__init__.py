"""Parametric separation of symmetric pure quantum states."""
from .distinguishability import (DistinguishabilityReport, d1_measure, d2_measure,
                                 e_derivatives, report)
from .lp import (KrausSet, LpInstance, LpSolution, brute_force_lp, build_lp,
                 perturbation_test, solve_lp, synthesize_kraus)
from .optics import OpticalLayout, assemble_stage2, jones_hwp, synthesize
from .separation import (DilationUnitary, SeparationMap, apply_map, build_map, dilation,
                         success_probability)
from .states import (FiducialSpec, SymmetricFamily, alpha_family, beta_coefficients,
                     beta_family, build_fiducial, u_family)
from .teleport import (TeleportReport, TeleportScenario, f_ave_formula, gxor,
                       qubit_conclusive, run_exact, run_monte_carlo)

__version__ = "0.1.0"
