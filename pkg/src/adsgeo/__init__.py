"""Numerical kernel and verification harness for spacelike-surface geometry
in anti-de Sitter 3-space."""

__version__ = "0.1.0"

from .ads_core import (IsometryPair, TangentClass, apply_isometry, bilinear22,
                       classify_tangent, from_matrix_model, geodesic_point,
                       to_matrix_model)
from .embedding import (ConvexityClass, EmbeddingData, Immersion,
                        convexity_class, embedding_data_at, gaussian_curvature,
                        make_immersion, structure_residuals,
                        third_fundamental_form)
from .mess_metrics import SharpData, mess_metric, sharp_frame, verify_left_metric_hyperbolic
from .constructions import (DualData, dual_surface, equidistant_data,
                            extension_curvature, extension_metric,
                            fuchsian_family, phi_k_fuchsian)
from .fuchsian import (DiscreteOperators, Genus2Mesh, HolonomySet,
                       discrete_operators, genus2_mesh, octagon_generators)
from .rigidity import (BMorphism, RigidityOperator, b_from_bdot, b_from_mu,
                       jbj_sharp, kernel_dimension, rigidity_operator,
                       sharp_codazzi_residual, trace_conditions)
from .report import CheckReport, CheckRow, emit_report
