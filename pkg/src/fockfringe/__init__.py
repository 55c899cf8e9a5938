"""Multi-photon interference of partially distinguishable entangled Fock states."""

from .analysis import (FringeScan, InterferenceBudget, SinusoidFit, VisibilityPoint,
                       analytic_single, analytic_three, contrast_sign_changes,
                       fit_sinusoid, fringe_scan, harmonic_content, interference_budget,
                       probability_at, visibility_curve)
from .errors import CapacityError, FitError, ParameterError, PreconditionError
from .fock import (FockBasisState, ModeLabel, Path, PureState, apply_delay_to_path_b,
                   build_nm_superposition, ket, out_ket)
from .optics import (BALANCED, BeamSplitterConvention, DetectionPattern,
                     apply_beam_splitter, detection_distribution, detection_probability)
from .oracle import oracle_detection_probability, permanent, transition_amplitude
from .wavepacket import DelayDecomposition, WavepacketSpec, decompose

__version__ = "0.1.0"
