"""Steady-state cooling of two feedback-damped mechanical modes.

Two independent computation routes for the same physics:

* :mod:`coldamp.analytic` - closed-form susceptibilities, cooling rates and
  four-channel noise spectra through the coefficient ladder;
* :mod:`coldamp.oracle` - direct frequency-domain linear-response solves.

:mod:`coldamp.cooling` integrates either route into steady-state phonon
numbers; :mod:`coldamp.sweeps` reproduces the published parameter scans;
the ``cool`` CLI drives everything.
"""

__version__ = "0.1.0"

from .model import (BareParams, SystemParams, ThermalEnvironment, normalize,
                    steady_state_means, temperature_from_occupation,
                    occupation_from_temperature)
from .ladder import CoefficientLadder, ladder
from .analytic import (SpectrumDecomposition, net_cooling_rate,
                       effective_damping, spring_shift, susceptibility,
                       noise_spectra, position_spectrum, spectrum)
from .oracle import (TransferSolution, OracleSpectrum, StabilityReport,
                     feedback_transfer, assemble, oracle_spectrum,
                     oracle_susceptibility, oracle_effective_damping,
                     stability_check)
from .modes import (ModeHybridization, bright_dark, amc_diagonalize,
                    dark_mode_residual)
from .cooling import (FrequencyGrid, CoolingReport, build_grid,
                      integrate_occupation, bare_quadrature_occupation,
                      effective_damping_profile)
from .config import ConfigError, SweepAxis, SweepSpec, load_config, parse_config
from .sweeps import (ResultTable, run_sweep, run_scenario, scenario_names,
                     validate)

__all__ = [name for name in dir() if not name.startswith("_")]
