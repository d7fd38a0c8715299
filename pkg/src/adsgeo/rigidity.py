"""The linearized rigidity chain.

Pointwise 2x2 layer: for a strongly convex shape operator B and an
I-self-adjoint variation Bdot, the morphism

    b = (E + J B)^{-1} J Bdot

satisfies tr((E + JB) b) = 0 always and tr((E + (JB)^{-1}) b) = 0 exactly
when the linearized Gauss equation tr(B^{-1} Bdot) = 0 holds; through the
Cayley-Hamilton identity J B = (1 + K) (J B)^{-1} the pair is equivalent
to tr(b) = 0, tr(J B b) = 0.

Field layer: b built from a potential, b = J# (-D# D# mu + mu E), is
traceless by pure algebra and satisfies the sharp Codazzi equation up to
discretization.  The operator J B J# is I#-self-adjoint with eigenvalues
(-k2, -k1).

Discrete layer: on the umbilic family fixture at parameter s the trace
equation reduces to tan|s| (Laplace - 2) on the genus-2 surface, assembled
here in weak form with a trivial-kernel verdict from the smallest
generalized eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .embedding import EmbeddingData, Immersion, embedding_data_at
from .errors import ConvexityError, DomainError
from .fd import DEFAULT_DIFF, DiffConfig, FDScheme, d1, gradient, hessian
from .fuchsian import DiscreteOperators, Genus2Mesh, discrete_operators, generalized_eigs
from .mess_metrics import SharpData, mess_metric, sharp_frame

STRONG_CONVEXITY_TOL = 1e-8


# ---------------------------------------------------------------------------
# pointwise 2x2 algebra

@dataclass(frozen=True)
class VariationField:
    """I-self-adjoint first-order variation of the shape operator."""

    Bdot: np.ndarray
    provenance: str = "analytic"


@dataclass(frozen=True)
class BMorphism:
    b: np.ndarray
    provenance: str
    idot_sharp: np.ndarray | None = None
    mu: float | None = None
    v: np.ndarray | None = None


def _check_strongly_convex(data: EmbeddingData, tol: float = STRONG_CONVEXITY_TOL):
    det_b = float(np.linalg.det(data.B))
    if det_b <= tol:
        raise ConvexityError(f"strong convexity required: det B = {det_b:.3e}")


def b_from_bdot(data: EmbeddingData, bdot) -> BMorphism:
    """b = (E + JB)^{-1} J Bdot, with the induced first variation of the
    plus metric I#(b . , . ) + I#( . , b . ) attached."""
    bdot = np.asarray(bdot, dtype=float)
    a = np.eye(2) + data.J @ data.B
    b = np.linalg.solve(a, data.J @ bdot)
    i_sharp = mess_metric(data, +1)
    idot = b.T @ i_sharp + i_sharp @ b
    return BMorphism(b=b, provenance="from_bdot", idot_sharp=idot)


@dataclass(frozen=True)
class TraceConditions:
    tr_b: float
    tr_jbb: float
    tr_binv_bdot: float
    tr_first: float      # tr((E + JB) b)
    tr_second: float     # tr((E + (JB)^{-1}) b)
    equivalence_gap: float

    def all_small(self, tol: float = 1e-9) -> bool:
        return max(abs(self.tr_b), abs(self.tr_jbb),
                   abs(self.tr_first), abs(self.tr_second)) < tol


def trace_conditions(data: EmbeddingData, bdot=None, b=None) -> TraceConditions:
    """The five traces of the linearized chain plus the equivalence gap.

    The gap measures how far the vanishing of the first pair is from being
    equivalent to the vanishing of (tr b, tr JBb): both pairs are linear
    images of each other through JB = (1+K)(JB)^{-1}, so the residual pairs
    are compared directly.
    """
    _check_strongly_convex(data)
    if (bdot is None) == (b is None):
        raise DomainError("provide exactly one of bdot, b")
    jb = data.J @ data.B
    if b is None:
        bdot = np.asarray(bdot, dtype=float)
        b = np.linalg.solve(np.eye(2) + jb, data.J @ bdot)
    else:
        b = np.asarray(b, dtype=float)
        bdot = -data.J @ (np.eye(2) + jb) @ b
    jb_inv = np.linalg.inv(jb)
    tr_b = float(np.trace(b))
    tr_jbb = float(np.trace(jb @ b))
    tr_first = float(np.trace((np.eye(2) + jb) @ b))
    tr_second = float(np.trace((np.eye(2) + jb_inv) @ b))
    tr_binv = float(np.trace(np.linalg.solve(data.B, bdot)))
    # (b1, b2) = L (b4, b5) with L = [[1, 1], [1, 1/(1+K)]], K < -1
    K = -1.0 - float(np.linalg.det(data.B))
    mixed = np.array([tr_b + tr_jbb, tr_b + tr_jbb / (1.0 + K)])
    gap = float(np.abs(mixed - np.array([tr_first, tr_second])).max())
    return TraceConditions(tr_b=tr_b, tr_jbb=tr_jbb, tr_binv_bdot=tr_binv,
                           tr_first=tr_first, tr_second=tr_second,
                           equivalence_gap=gap)


def cayley_hamilton_residual(data: EmbeddingData) -> float:
    """Componentwise residual of J B = (1 + K) (J B)^{-1}, K = -1 - det B."""
    _check_strongly_convex(data)
    jb = data.J @ data.B
    K = -1.0 - float(np.linalg.det(data.B))
    return float(np.abs(jb - (1.0 + K) * np.linalg.inv(jb)).max())


def variation_formula_residual(data: EmbeddingData, bdot, dt: float = 1e-6) -> float:
    """Central t-difference of I#_+(B + t Bdot) against I#(b.,.) + I#(.,b.)."""
    bdot = np.asarray(bdot, dtype=float)

    def i_sharp_at(t):
        a = np.eye(2) + data.J @ (data.B + t * bdot)
        return a.T @ data.I @ a

    numeric = (i_sharp_at(dt) - i_sharp_at(-dt)) / (2.0 * dt)
    algebraic = b_from_bdot(data, bdot).idot_sharp
    return float(np.abs(numeric - algebraic).max())


def random_convex_pair(rng, eig_low: float = 0.3, eig_high: float = 2.5):
    """Random (I, B, Bdot): I SPD, B strongly convex and I-self-adjoint,
    Bdot I-self-adjoint with tr(B^{-1} Bdot) projected to zero."""
    a = rng.standard_normal((2, 2))
    I = a.T @ a + 0.5 * np.eye(2)
    L = np.linalg.cholesky(I)
    k = rng.uniform(eig_low, eig_high, size=2)
    q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    d = q @ np.diag(k) @ q.T
    B = np.linalg.solve(L.T, d @ L.T)
    s = rng.standard_normal((2, 2))
    bdot0 = np.linalg.solve(I, s + s.T)
    bdot = bdot0 - 0.5 * float(np.trace(np.linalg.solve(B, bdot0))) * B
    return I, B, bdot


def linearized_chain_batch(n: int, seed: int = 0):
    """Max residuals of the trace identities over n random convex pairs."""
    rng = np.random.default_rng(seed)
    worst = {"tr_b": 0.0, "tr_jbb": 0.0, "tr_first": 0.0, "tr_second": 0.0,
             "cayley_hamilton": 0.0, "tr_binv_bdot": 0.0}
    eye = np.eye(2)
    for _ in range(n):
        I, B, bdot = random_convex_pair(rng)
        from .embedding import complex_structure

        J = complex_structure(I)
        jb = J @ B
        b = np.linalg.solve(eye + jb, J @ bdot)
        worst["tr_b"] = max(worst["tr_b"], abs(np.trace(b)))
        worst["tr_jbb"] = max(worst["tr_jbb"], abs(np.trace(jb @ b)))
        worst["tr_first"] = max(worst["tr_first"], abs(np.trace((eye + jb) @ b)))
        worst["tr_second"] = max(worst["tr_second"],
                                 abs(np.trace((eye + np.linalg.inv(jb)) @ b)))
        worst["tr_binv_bdot"] = max(worst["tr_binv_bdot"],
                                    abs(np.trace(np.linalg.solve(B, bdot))))
        K = -1.0 - np.linalg.det(B)
        worst["cayley_hamilton"] = max(
            worst["cayley_hamilton"],
            np.abs(jb - (1.0 + K) * np.linalg.inv(jb)).max())
    return worst


# ---------------------------------------------------------------------------
# potentials: b = J# (-D# D# mu + mu E)

def b_from_mu(mu, sharp: SharpData, scheme: FDScheme) -> BMorphism:
    """Synthesize b from a scalar potential at the sharp frame's point.

    The covariant Hessian uses the sharp Christoffel symbols; tr(b) = 0
    holds by algebra (J# composed with an I#-self-adjoint operator).
    """
    u = sharp.u
    dmu = gradient(mu, u, scheme)
    ddmu = hessian(mu, u, scheme)
    hess = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            hess[i, j] = ddmu[i, j] - float(sharp.christoffels[:, i, j] @ dmu)
    # the covariant Hessian of a function is symmetric; discarding the
    # finite-difference torsion noise keeps tr(b) = 0 at rounding level
    hess = 0.5 * (hess + hess.T)
    hess_op = np.linalg.solve(sharp.I_sharp, hess)
    mu0 = float(mu(u))
    b = sharp.J_sharp @ (-hess_op + mu0 * np.eye(2))
    grad_sharp = np.linalg.solve(sharp.I_sharp, dmu)
    v = -sharp.J_sharp @ grad_sharp
    return BMorphism(b=b, provenance="from_mu", mu=mu0, v=v)


def b_field_from_mu(immersion: Immersion, mu, cfg: DiffConfig = DEFAULT_DIFF,
                    mu_scheme: FDScheme | None = None):
    """The b field of a potential as a plain callable on the chart."""
    mu_scheme = mu_scheme or cfg.inner2

    def bf(u):
        frame = sharp_frame(immersion, u, cfg=cfg, check=False)
        return b_from_mu(mu, frame, mu_scheme).b

    return bf


def sharp_codazzi_residual(immersion: Immersion, b_field, u,
                           cfg: DiffConfig = DEFAULT_DIFF) -> float:
    """| D#_1 (b d2) - D#_2 (b d1) |_{I#} for an operator field b."""
    u = np.asarray(u, dtype=float)
    frame = sharp_frame(immersion, u, cfg=cfg, check=False)
    b = np.asarray(b_field(u), dtype=float)
    db1 = d1(b_field, u, 0, cfg.field)
    db2 = d1(b_field, u, 1, cfg.field)
    gamma = frame.christoffels
    vec = np.empty(2)
    for m in range(2):
        vec[m] = db1[m, 1] - db2[m, 0]
        for k in range(2):
            vec[m] += gamma[m, 0, k] * b[k, 1] - gamma[m, 1, k] * b[k, 0]
    return float(np.sqrt(max(vec @ frame.I_sharp @ vec, 0.0)))


def exterior_derivative_identities(immersion: Immersion, mu, u,
                                   cfg: DiffConfig = DEFAULT_DIFF,
                                   mu_scheme: FDScheme | None = None):
    """Residuals of the two sharp exterior-derivative identities

        d^{D#}(D# v)(d1, d2) = -K# (J# v) da#,
        d^{D#}(mu J#)(d1, d2) = -(D# mu) da#,

    evaluated for the vector field v = -J# D# mu of the potential."""
    u = np.asarray(u, dtype=float)
    mu_scheme = mu_scheme or cfg.inner2
    frame = sharp_frame(immersion, u, cfg=cfg, check=False)

    def v_field(w):
        fr = sharp_frame(immersion, w, cfg=cfg, check=False)
        return -fr.J_sharp @ np.linalg.solve(fr.I_sharp, gradient(mu, w, mu_scheme))

    def dv_operator(w):
        fr = sharp_frame(immersion, w, cfg=cfg, check=False)
        v0 = v_field(w)
        dv = np.stack([d1(v_field, w, 0, cfg.field), d1(v_field, w, 1, cfg.field)])
        out = np.empty((2, 2))
        for j in range(2):
            out[:, j] = dv[j] + fr.christoffels[:, j, :] @ v0
        return out

    def mu_jsharp(w):
        fr = sharp_frame(immersion, w, cfg=cfg, check=False)
        return float(mu(w)) * fr.J_sharp

    def d_sharp_of(field):
        m = np.asarray(field(u), dtype=float)
        d1f = d1(field, u, 0, cfg.field)
        d2f = d1(field, u, 1, cfg.field)
        vec = np.empty(2)
        for mm in range(2):
            vec[mm] = d1f[mm, 1] - d2f[mm, 0]
            for k in range(2):
                vec[mm] += frame.christoffels[mm, 0, k] * m[k, 1]
                vec[mm] -= frame.christoffels[mm, 1, k] * m[k, 0]
        return vec

    v0 = v_field(u)
    lhs_a = d_sharp_of(dv_operator)
    rhs_a = -frame.K_sharp * (frame.J_sharp @ v0) * frame.da_sharp
    resid_a = float(np.abs(lhs_a - rhs_a).max())

    lhs_b = d_sharp_of(mu_jsharp)
    grad_sharp = np.linalg.solve(frame.I_sharp, gradient(mu, u, mu_scheme))
    rhs_b = -grad_sharp * frame.da_sharp
    resid_b = float(np.abs(lhs_b - rhs_b).max())
    return resid_a, resid_b


# ---------------------------------------------------------------------------
# the operator J B J#

def jbj_sharp(data: EmbeddingData, tol: float = STRONG_CONVEXITY_TOL):
    """(J B J#, eigenvalues ascending, I#-self-adjointness residual).

    Eigenvalues are the negated principal curvatures; negative definiteness
    holds exactly on the strongly past-convex side of the paper's lemma.
    """
    _check_strongly_convex(data, tol=tol)
    a = np.eye(2) + data.J @ data.B
    j_sharp = np.linalg.solve(a, data.J @ a)
    op = data.J @ data.B @ j_sharp
    i_sharp = mess_metric(data, +1)
    sym = i_sharp @ op
    selfadj = float(np.abs(sym - sym.T).max())
    eigs = np.sort(scipy.linalg.eigh(0.5 * (sym + sym.T), i_sharp,
                                     eigvals_only=True))
    return op, eigs, selfadj


# ---------------------------------------------------------------------------
# discrete rigidity operator on the umbilic fixture

@dataclass(frozen=True)
class RigidityOperator:
    """Weak form of mu -> tan|s| (Laplace - 2) mu on the glued genus-2 mesh.

    ``matrix`` is tan|s| (-S - 2 M) against the mass inner product M; for
    the umbilic fixture at parameter s this is the trace equation
    tr(J B J# (-D# D# mu + mu E)) = 0 up to the (positive) factor and
    discretization.
    """

    matrix: scipy.sparse.csr_matrix
    mass: scipy.sparse.csr_matrix
    mesh_level: int
    s: float
    k_value: float          # umbilic principal curvature tan(s)
    tan_abs_s: float


def rigidity_operator(mesh: Genus2Mesh, s: float) -> RigidityOperator:
    if not -np.pi / 2 < s < 0.0:
        raise DomainError(f"umbilic fixture needs s in (-pi/2, 0), got {s}")
    ops = discrete_operators(mesh, scale=1.0)
    t = float(np.tan(abs(s)))
    matrix = (t * (-ops.stiffness - 2.0 * ops.mass)).tocsr()
    return RigidityOperator(matrix=matrix, mass=ops.mass, mesh_level=mesh.level,
                            s=s, k_value=float(np.tan(s)), tan_abs_s=t)


def rigidity_spectrum(op: RigidityOperator, k: int = 6, seed: int = 0):
    """Smallest-magnitude generalized eigenvalues of (matrix, mass)."""
    return generalized_eigs(op.matrix, op.mass, k=k, seed=seed)


def kernel_dimension(eigs, ratio_threshold: float = 10.0) -> int:
    """Count of eigenvalues below the dominant magnitude gap.

    The split point with the largest magnitude ratio defines the candidate
    kernel; it only counts when that ratio exceeds the threshold.
    """
    mags = np.sort(np.abs(np.asarray(eigs, dtype=float)))
    if len(mags) < 2:
        return 0
    floor = 1e-300
    ratios = mags[1:] / np.maximum(mags[:-1], floor)
    best = int(np.argmax(ratios))
    if ratios[best] > ratio_threshold:
        return best + 1
    return 0


def constant_function_check(op: RigidityOperator) -> float:
    """Pointwise weak-form check L(1) = -2 tan|s| against the mass of 1."""
    ones = np.ones(op.matrix.shape[0])
    lhs = op.matrix @ ones
    rhs = -2.0 * op.tan_abs_s * (op.mass @ ones)
    return float(np.abs(lhs - rhs).max() / np.abs(rhs).max())
