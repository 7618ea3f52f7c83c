"""Higher Herglotz functions, twisted quadratic-field zeta values and their tooling."""
from .errors import (DegenerateArguments, DegenerateCycle, DegeneratePhase, DomainError,
                     HznError, NonConvergent, NonRationalInput, NormMinusOneField,
                     NotFundamentalDiscriminant, NotReduced, PoleEncountered, TwistNotInS)
from .hzn import (HznValue, cocycle_psi, dop, herglotz_F, higher_herglotz_plain,
                  hzn_asymptotic, hzn_deriv, hzn_eval, hzn_family, novikov_rho,
                  period_residuals, taylor_a)
from .kernels import BACKEND
from .numerics import (QuadratureRule, SeriesConfig, gauss_legendre, quad_halfline,
                       quad_panel, sum_phased)
from .quadfield import (FieldData, IndefForm, MinusCycle, QuadIrr, field_report,
                        forms_of, fundamental_unit, in_set_S, minus_cf, narrow_classes,
                        red_set, wide_red_sets)
from .special import (digamma, double_polylog, lerch_psi, polylog,
                      polylog_order_deriv_s1)
from .values import ComplexValue, TwistPair, UnitPhase
from .zeta import (EtaSeriesParams, VZReport, ZetaResult, eisenstein_G, eta_A,
                   gde_and_residual, hzn_eta_residual, pk, verify_vz, wk, zcal,
                   zeta_narrow, zq)

__version__ = "0.1.0"
