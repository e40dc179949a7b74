"""Differential-operator systems for the Haar measure on SO(n) and the Fisher integral."""

from .polycore import (
    GREVLEX,
    GRLEX,
    LEX,
    BudgetExhausted,
    GroebnerBasis,
    Polynomial,
    TableMismatchError,
    TermOrder,
    Variable,
    groebner,
    krull_dimension,
    normal_form,
    var,
    weight_order,
)
from .weylcore import (
    ExpPolyFunction,
    WeylOperator,
    adjoint,
    apply,
    fourier,
    fourier_inv,
    symbol_01,
    twist,
    weyl_mul,
)
from .dgb import (
    EmptyCharacteristicVariety,
    WeylIdealPresentation,
    characteristic_ideal,
    is_holonomic,
    weyl_groebner,
    weyl_normal_form,
)
from .songen import (
    GeneratorSet,
    PfaffianSystem,
    SingularLocusError,
    char_ideal_generators,
    diagonal_operators,
    fisher_generators,
    haar_generators,
    pfaffian_so3,
    phi_psi_residuals,
    so3_mixed_operators,
)

from .numint import (
    Bessel,
    MonteCarlo,
    Quadrature,
    annihilation_residual,
    bessel_i0,
    fisher_moment,
    fisher_value,
    haar_sample,
    hgm_evaluate,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

