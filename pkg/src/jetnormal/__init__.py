"""Point-cloud normal estimation by weighted n-jet fitting."""
from .alignment import AlignmentResult, pca_align, world_normal, z_align_iterate
from .errors import (
    DegenerateHull,
    DegeneratePatch,
    DegenerateSum,
    ExactFit,
    IllConditioned,
    JetNormalError,
    MalformedLine,
    RankDeficient,
)
from .estimate import estimate_normals
from .geometry import PatchNeighborhood, PointCloud, Rotation, apply_rotation, knn_patch, rotate_to_z
from .jet import (
    FlatnessDiagnostic,
    JetCoefficients,
    JetFit,
    fit_jet,
    flatness_ratio,
    gaussian_weights,
    irls_refit,
    normal_from_jet,
    uniform_weights,
    vandermonde,
)
from .refine import (
    LossBreakdown,
    LossWeights,
    ResidualTerm,
    apply_residual,
    normal_loss,
    oracle_residual,
    sin_loss,
    total_loss,
    trans_loss,
)
from .sensitivity import dalpha_dw, dnormal_dw, weight_jacobian

__version__ = "0.1.0"
