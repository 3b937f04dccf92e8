"""Spin-orbit structured light through an asymmetric Mach-Zehnder interferometer."""
from .biphoton import (
    ModeLabel,
    OperatorPolynomial,
    biphoton_input,
    bunching_probability,
    coincidence_probability,
    hom_output_state,
    substitute_output_operators,
)
from .errors import ConfigError, InvalidParameterError, InvalidStateError
from .fields import (
    ABSymbols,
    FieldGrid,
    GridSpec,
    ab_symbols,
    basis_field,
    gaussian_profile,
    power_density,
    psi_from_basis,
    psi_parameterized,
    single_input_power,
)
from .interferometer import (
    PortPair,
    TransferMatrix,
    classical_dual_output,
    propagate,
    single_input_output,
    transfer_matrix,
)
from .modes import (
    BASIS,
    BasisModeIndex,
    PoincareAngles,
    SpinOrbitAmplitudes,
    parity_sign,
    product_amplitudes,
    separability_witness,
)
from .polarization import (
    PolarizationEllipse,
    apply_polarizer,
    apply_retarder,
    ellipse_map,
    polarized_power,
    polarizer_matrix,
)
from .scenarios import RunReport, ScenarioConfig, run_biphoton_sweep, run_scenario

__version__ = "0.1.0"
