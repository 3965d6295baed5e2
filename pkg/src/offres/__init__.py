"""Off-resonance quantum search: transition probabilities, Fisher geometry and
robustness of four driving schemes, with an ODE oracle for every closed form."""
from .errors import (
    IntegrationQualityError,
    InvalidArgumentError,
    NoResonanceError,
    NumericalError,
    OffresError,
    SingularityError,
    StepUnderflowError,
)
from .fisher import (
    FisherPoint,
    dsigma_dtheta,
    fisher_closed,
    fisher_finite_difference,
    fisher_generic,
    fisher_on_resonance,
    fisher_point,
)
from .geodesic import (
    GeodesicState,
    GeodesicTrajectory,
    constraint_residual,
    geodesic_acceleration,
    geodesic_speed,
    integrate_geodesic,
)
from .oracle import (
    Amplitudes,
    FieldRealization,
    Frame,
    evolve_amplitudes,
    lab_frame_fields,
    rotating_frame_hamiltonian,
    source_transition_probability,
    transition_probability_numeric,
    unitarity_defect,
)
from .resonance import (
    ClassicalOscillator,
    TwoLevelStatic,
    classical_resonance_curve,
    classical_resonant_frequency,
    field_conversion,
    quantum_resonance_curve,
    quantum_resonant_frequency,
    static_beta0,
)
from .robustness import (
    RegionGrid,
    SpeedPair,
    beta0_bound_for_fidelity,
    robustness_coefficient,
    scan_outperformance_region,
    speed_pair,
    v_off,
    v_on,
)
from .schemes import (
    Detuning,
    DomainWarning,
    DrivingKind,
    DrivingScheme,
    all_schemes,
    amplitude_factor,
    detuning_beta0,
    failure_probability,
    omega_H,
    pulse_area,
    rabi_rate,
    sigma,
    success_probability,
)

__version__ = "0.1.0"
