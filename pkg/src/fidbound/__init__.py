"""Lower bounds on two-qubit process fidelity from d + 1 probe-state fidelities."""
from .bound2q import BoundReport, ExtremalParams, Regime, bound, extremal_channel, params_from_fidelities, threshold
from .channels import ChoiMatrix, apply, choi_from_unitary, depolarizing, is_cptp, mix
from .fidelity import basis_fidelity, hofmann_bound, process_fidelity, superposition_fidelity

__version__ = "0.1.0"
