"""Secrecy-rate maximization for surface-aided multicast radar-communication."""

from .bcd import OptimizeOptions, OptimizerTrace, optimize
from .cli import NamedScenario, SweepSpec, builtin_scenarios, run_sweep, summarize
from .errors import (DfrcError, DimensionMismatch, EmptyIndirectSet, Infeasible,
                     NonMonotone, NotHermitian, NotPositiveDefinite, WrongPartition)
from .linalg import logdet_hpd, solve_hpd
from .precoder import LinearizedSinrConstraint, linearize_sinr, solve_precoders
from .rates import (PrecoderPair, eavesdropper_rate, secrecy_objective,
                    sinr_direct, sinr_indirect, user_rate)
from .scenario import (ChannelSet, PhaseVector, ScenarioConfig,
                       build_composite_indirect_channel, build_direct_target_channel,
                       build_ed_channel, sample_channels, steering_vector)
from .spsa import SpsaSchedule, optimize_phases, phase_objective, spsa_step
from .surrogate import (AuxiliarySet, PairAuxiliaries, mse_matrix_ed,
                        mse_matrix_user, surrogate_secrecy, update_auxiliaries)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
