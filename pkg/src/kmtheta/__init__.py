"""Polynomial-weighted theta functions on lattice Grassmannians, their
metaplectic transformation behaviour, the hyperbolic-plane splitting,
and the unfolded Fourier expansion of the associated lift — with a
certification suite for every identity in the pipeline."""

from .lattice import (GramLattice, build_lattice, discriminant_group,
                      split_data, SplitData)
from .halfpower import HalfPowerPoly
from .km_polys import km_poly, exp_laplacian, u_decompose, hermite
from .weil import WeilRep, weil_generators, GeneratorWord
from .grassmannian import (SplitFrame, split_frame, grass_point,
                           isometry_to_base, eichler, Isometry)
from .theta import (ThetaRequest, ThetaValue, siegel_theta,
                    siegel_theta_brute, modularity_defect,
                    split_theta_sides, CuspFormData, synthetic_cusp_form)
from .lift import (LiftRequest, FourierResult, fourier_coefficient,
                   strip_integral_check, h_kernel, y_integral,
                   gauge_isometry, forward_gauge_tables,
                   eliminate_coefficients, UNRESOLVED)
from .config import RunConfig, load_config
from .verify import run_suite

__version__ = "0.1.0"
