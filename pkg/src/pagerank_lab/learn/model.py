"""Feature-parameterized PageRank and its least-squares fitting objective.

For a query graph with edge features ``y_e`` and node features ``y_w`` the
parameter vector ``x = (x_P, x_pi)`` (each of length ``l``) defines

* transition weights ``P_e = softmax over out-edges of <x_P, y_e>``,
* teleport distribution ``pi_w = softmax over nodes of <x_pi, y_w>``,

and the ranking is ``T`` steps of ``p <- (1-delta) P^T p + delta pi`` from the
uniform vector. Truncating at ``T`` is part of the definition, so the
reverse-mode gradient below is the exact gradient of what is computed.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .. import _rng
from .._errors import ParameterError


def default_steps(delta, tol=1e-8):
    """Steps after which ``2 (1-delta)^T <= tol`` holds, via ``ln(2/tol)/delta``."""
    return math.ceil(math.log(2.0 / tol) / delta)


@dataclass(eq=False)
class RankingModel:
    n_nodes: int
    src: np.ndarray
    dst: np.ndarray
    edge_features: np.ndarray
    node_features: np.ndarray
    delta: float = 0.15
    T: int | None = None

    def __post_init__(self):
        src = np.asarray(self.src, dtype=np.int64)
        dst = np.asarray(self.dst, dtype=np.int64)
        order = np.lexsort((dst, src))
        self.src, self.dst = src[order], dst[order]
        self.edge_features = np.asarray(self.edge_features, dtype=np.float64)[order]
        self.node_features = np.asarray(self.node_features, dtype=np.float64)
        n = self.n_nodes = int(self.n_nodes)
        if self.T is None:
            self.T = default_steps(self.delta)
        if not 0 < self.delta <= 1 or self.T < 1:
            raise ParameterError("need 0 < delta <= 1 and T >= 1")
        if self.edge_features.ndim != 2 or self.edge_features.shape[0] != self.src.size:
            raise ParameterError("edge_features must have one row per edge")
        if self.node_features.shape != (n, self.edge_features.shape[1]):
            raise ParameterError("node_features must be (n_nodes, l) with the edge feature width")
        if np.any((self.src < 0) | (self.src >= n) | (self.dst < 0) | (self.dst >= n)):
            raise ParameterError("edge endpoint out of range")
        out = np.bincount(self.src, minlength=n)
        if np.any(out == 0):
            raise ParameterError(f"node {int(np.argmin(out))} has no outgoing edge")
        self.offsets = np.concatenate([[0], np.cumsum(out)])

    @property
    def n_features(self):
        return self.edge_features.shape[1]

    @property
    def dim(self):
        return 2 * self.n_features


def split_params(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ParameterError(f"parameter vector must have length {model.dim}")
    return x[:model.n_features], x[model.n_features:]


def _segment_softmax(s, offsets):
    seg = np.repeat(np.arange(offsets.size - 1), np.diff(offsets))
    z = np.exp(s - np.maximum.reduceat(s, offsets[:-1])[seg])
    return z / np.add.reduceat(z, offsets[:-1])[seg], seg


def build_transition(model, x):
    """Edge weights (aligned with ``model.src``/``model.dst``) and teleport vector."""
    x_p, x_pi = split_params(model, x)
    w, _ = _segment_softmax(model.edge_features @ x_p, model.offsets)
    s = model.node_features @ x_pi
    z = np.exp(s - s.max())
    return w, z / z.sum()


def transition_matrix(model, x):
    """Dense ``P`` for small models (testing and oracles)."""
    w, _ = build_transition(model, x)
    P = np.zeros((model.n_nodes, model.n_nodes))
    np.add.at(P, (model.src, model.dst), w)
    return P


def _propagate(model, w, p):
    return np.bincount(model.dst, weights=w * p[model.src], minlength=model.n_nodes)


def solve_ranking(model, x, return_path=False):
    """``T`` steps of the teleported iteration from the uniform start."""
    w, pi = build_transition(model, x)
    d = model.delta
    p = np.full(model.n_nodes, 1.0 / model.n_nodes)
    path = [p]
    for _ in range(model.T):
        p = (1.0 - d) * _propagate(model, w, p) + d * pi
        if return_path:
            path.append(p)
    return (p, path, w, pi) if return_path else p


@dataclass(eq=False)
class LabeledQuery:
    """A query graph plus assessor grades (0..4) on some of its nodes."""

    model: RankingModel
    labels: dict
    nodes: np.ndarray = field(init=False, repr=False)
    targets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.labels:
            raise ParameterError("a labeled query needs at least one labeled node")
        nodes = np.array(sorted(self.labels), dtype=np.int64)
        grades = np.array([self.labels[k] for k in nodes], dtype=np.float64)
        if np.any((grades < 0) | (grades > 4)) or np.any(grades != np.round(grades)):
            raise ParameterError("grades must be integers in 0..4")
        if np.any((nodes < 0) | (nodes >= self.model.n_nodes)):
            raise ParameterError("labeled node out of range")
        if grades.sum() == 0:
            raise ParameterError("grades are all zero; targets cannot be normalized")
        self.nodes, self.targets = nodes, grades / grades.sum()


def _as_queries(queries):
    return [queries] if isinstance(queries, LabeledQuery) else list(queries)


def objective(queries, x):
    """``sum_q 0.5 * sum_{labeled w} (p_w(q, x) - target_w)^2``."""
    total = 0.0
    for q in _as_queries(queries):
        r = solve_ranking(q.model, x)[q.nodes] - q.targets
        total += 0.5 * float(r @ r)
    return total


def _query_value_and_grad(q, x, logit_grads=None):
    model = q.model
    d = model.delta
    p, path, w, pi = solve_ranking(model, x, return_path=True)
    r = p[q.nodes] - q.targets
    g = np.zeros(model.n_nodes)
    g[q.nodes] = r
    w_bar = np.zeros_like(w)
    pi_bar = np.zeros_like(pi)
    for p_t in reversed(path[:-1]):
        # g is the adjoint of p_{t+1} = (1-d) P^T p_t + d pi
        w_bar += (1.0 - d) * g[model.dst] * p_t[model.src]
        pi_bar += d * g
        g = (1.0 - d) * np.bincount(model.src, weights=w * g[model.dst], minlength=model.n_nodes)
    seg = np.repeat(np.arange(model.n_nodes), np.diff(model.offsets))
    s_bar = w * (w_bar - np.add.reduceat(w * w_bar, model.offsets[:-1])[seg])
    t_bar = pi * (pi_bar - pi @ pi_bar)
    if logit_grads is not None:
        logit_grads.append((s_bar, t_bar))
    grad = np.concatenate([model.edge_features.T @ s_bar, model.node_features.T @ t_bar])
    return 0.5 * float(r @ r), grad


def objective_and_gradient(queries, x, logit_grads=None):
    """Objective and its gradient by reverse accumulation through all ``T`` steps.

    The backward sweep costs about two forward sweeps; the iterates of the
    forward pass are kept in memory (``T * n`` floats per query). If
    ``logit_grads`` is a list, per-query gradients with respect to the edge
    and node logits are appended to it.
    """
    x = np.asarray(x, dtype=np.float64)
    F, G = 0.0, np.zeros_like(x)
    for q in _as_queries(queries):
        f, g = _query_value_and_grad(q, x, logit_grads)
        F += f
        G += g
    return F, G


def random_query_graph(n, out_degree, rng):
    """Each node links to ``out_degree`` distinct other nodes chosen uniformly."""
    k = min(out_degree, n - 1) if n > 1 else 1
    src, dst = [], []
    for i in range(n):
        if n == 1:
            nb = np.array([0])
        else:
            nb = rng.choice(n - 1, size=k, replace=False)
            nb = nb + (nb >= i)
        src.extend([i] * len(nb))
        dst.extend(nb.tolist())
    return np.array(src), np.array(dst)


def synthetic_query(n, l, x_true, seed, out_degree=4, T=50, delta=0.15,
                    label_fraction=1.0, noise_features=False):
    """Random query whose grades come from the ranking under ``x_true``.

    Grades are ``round(4 p_w / max p)`` over a random subset of nodes. With
    ``noise_features=True`` the returned model carries fresh random features
    unrelated to the ones that produced the grades, while graph and grades
    are unchanged; this is the uninformative scenario for model selection.
    """
    rng = np.random.default_rng(_rng.derive_key(seed, _rng.STREAM_SYNTHETIC))
    src, dst = random_query_graph(n, out_degree, rng)
    ef = rng.standard_normal((src.size, l))
    nf = rng.standard_normal((n, l))
    truth = RankingModel(n, src, dst, ef, nf, delta, T)
    p = solve_ranking(truth, x_true)
    n_lab = max(1, int(round(label_fraction * n)))
    nodes = np.sort(rng.choice(n, size=n_lab, replace=False))
    grades = np.rint(4.0 * p[nodes] / p[nodes].max()).astype(int)
    if grades.sum() == 0:
        grades[np.argmax(p[nodes])] = 4
    labels = dict(zip(nodes.tolist(), grades.tolist()))
    model = truth
    if noise_features:
        noise = np.random.default_rng(_rng.derive_key(seed, _rng.STREAM_SYNTHETIC, 1))
        model = RankingModel(n, truth.src, truth.dst, noise.standard_normal((src.size, l)),
                             noise.standard_normal((n, l)), delta, T)
    return LabeledQuery(model, labels)


def write_instance(q, path):
    """Write one labeled query as an ``SPRL 1`` text file.

    Layout: header, one ``i j f1..fl`` line per edge, exactly ``n`` node
    lines ``w f1..fl`` in node order, then ``w grade`` label lines.
    """
    m = q.model
    fmt = lambda row: " ".join(repr(float(v)) for v in row)  # noqa: E731
    with open(path, "w") as fh:
        fh.write(f"SPRL 1 {m.n_nodes} {m.n_features} {m.T} {m.delta!r}\n")
        for i, j, f in zip(m.src.tolist(), m.dst.tolist(), m.edge_features):
            fh.write(f"{i} {j} {fmt(f)}\n")
        for w, f in enumerate(m.node_features):
            fh.write(f"{w} {fmt(f)}\n")
        for w in q.nodes.tolist():
            fh.write(f"{w} {q.labels[w]}\n")


def read_instance(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 6 or header[:2] != ["SPRL", "1"]:
            raise ParameterError(f"{path}: not an SPRL 1 instance file")
        n, l, T, delta = int(header[2]), int(header[3]), int(header[4]), float(header[5])
        lines = [ln.split() for ln in fh if ln.strip()]
    n_edges = 0
    while n_edges < len(lines) and len(lines[n_edges]) == l + 2:
        n_edges += 1
    edges = np.array(lines[:n_edges], dtype=np.float64).reshape(-1, l + 2)
    nodes = np.array(lines[n_edges:n_edges + n], dtype=np.float64).reshape(-1, l + 1)
    if nodes.shape[0] != n or not np.array_equal(nodes[:, 0], np.arange(n)):
        raise ParameterError(f"{path}: expected {n} node lines in node order after the edges")
    labels = {int(w): int(g) for w, g in lines[n_edges + n:]}
    model = RankingModel(n, edges[:, 0].astype(np.int64), edges[:, 1].astype(np.int64),
                         edges[:, 2:], nodes[:, 1:], delta, T)
    return LabeledQuery(model, labels)
