"""Small dense ReLU network with softmax cross-entropy, backprop and Adam.

Parameters of all layers live in one flat float64 vector; ``Mlp.weights`` and
``Mlp.biases`` are views into it. Per layer the block is the weight matrix
(fan_out x fan_in, row-major) followed by the bias vector.

Training runs through a numba-compiled epoch kernel that does the same
per-batch arithmetic as :func:`loss_and_grad` followed by :func:`adam_step`.
The numpy functions remain the public reference path and can drive training
directly with ``train(..., backend="numpy")``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .rng import Xoshiro256

N_INPUTS = 4
N_CLASSES = 3


class TrainingDiverged(RuntimeError):
    def __init__(self, message, seed=None):
        super().__init__(message if seed is None else f"{message} (init_seed={seed})")
        self.seed = seed


@dataclass(frozen=True)
class MlpArchitecture:
    layer_sizes: tuple
    frozen: tuple = None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 2 or sizes[0] != N_INPUTS or sizes[-1] != N_CLASSES:
            raise ValueError(f"layer sizes must start with {N_INPUTS} and end with {N_CLASSES}, got {sizes}")
        if any(s < 1 for s in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        frozen = (False,) * (len(sizes) - 1) if self.frozen is None else tuple(bool(f) for f in self.frozen)
        if len(frozen) != len(sizes) - 1:
            raise ValueError("need one frozen flag per weight layer")
        object.__setattr__(self, "frozen", frozen)

    @classmethod
    def deep(cls, hidden, freeze_lower=False):
        return cls((N_INPUTS, hidden, N_CLASSES), (freeze_lower, False))

    @classmethod
    def shallow(cls):
        return cls((N_INPUTS, N_CLASSES))

    @property
    def n_layers(self):
        return len(self.layer_sizes) - 1

    def offsets(self):
        """Flat-vector offsets ``(w_off, b_off, n_params)`` per layer."""
        w_off, b_off = [], []
        pos = 0
        for fin, fout in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            w_off.append(pos)
            pos += fin * fout
            b_off.append(pos)
            pos += fout
        return w_off, b_off, pos


class Mlp:
    def __init__(self, arch, params=None):
        self.arch = arch
        w_off, b_off, n = arch.offsets()
        if params is None:
            params = np.zeros(n)
        params = np.ascontiguousarray(params, dtype=np.float64)
        if params.shape != (n,):
            raise ValueError(f"expected {n} parameters, got shape {params.shape}")
        self.params = params
        self.weights = []
        self.biases = []
        sizes = arch.layer_sizes
        for l in range(arch.n_layers):
            fin, fout = sizes[l], sizes[l + 1]
            self.weights.append(params[w_off[l]:w_off[l] + fin * fout].reshape(fout, fin))
            self.biases.append(params[b_off[l]:b_off[l] + fout])

    def copy(self):
        return Mlp(self.arch, self.params.copy())

    def trainable_mask(self):
        mask = np.ones(self.params.shape, dtype=np.bool_)
        w_off, b_off, _ = self.arch.offsets()
        sizes = self.arch.layer_sizes
        for l, frozen in enumerate(self.arch.frozen):
            if frozen:
                mask[w_off[l]:b_off[l] + sizes[l + 1]] = False
        return mask

    def to_dict(self):
        return {
            "layer_sizes": list(self.arch.layer_sizes),
            "frozen": list(self.arch.frozen),
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, d):
        arch = MlpArchitecture(tuple(d["layer_sizes"]), tuple(d["frozen"]))
        net = cls(arch)
        for l in range(arch.n_layers):
            net.weights[l][...] = np.asarray(d["weights"][l], dtype=np.float64)
            net.biases[l][...] = np.asarray(d["biases"][l], dtype=np.float64)
        return net


def init(arch, seed):
    """Uniform fan-in/fan-out weights (Glorot), zero biases."""
    net = Mlp(arch)
    rng = Xoshiro256(seed)
    for w in net.weights:
        fout, fin = w.shape
        a = math.sqrt(6.0 / (fin + fout))
        w[...] = (a * (2.0 * rng.uniform_array(w.size) - 1.0)).reshape(w.shape)
    return net


def softmax(logits):
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def forward(net, f):
    """Logits for one feature vector (shape (4,)) or a batch (shape (n, 4)).

    The cache holds ``(pre_activations, activations)``; ``activations[0]``
    is the input itself.
    """
    x = np.asarray(f, dtype=np.float64)
    if x.shape[-1] != net.arch.layer_sizes[0]:
        raise ValueError(f"expected {net.arch.layer_sizes[0]} input features, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite input")
    pre, acts = [], [x]
    a = x
    last = net.arch.n_layers - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        pre.append(z)
        a = z if l == last else np.maximum(z, 0.0)
        acts.append(a)
    return a, (pre, acts)


def predict(net, X):
    logits, _ = forward(net, X)
    return np.argmax(logits, axis=-1)


def loss_and_grad(net, X, y):
    """Mean softmax cross-entropy over a batch and its exact gradient.

    Returns ``(loss, grads)`` where ``grads`` alternates weight and bias
    gradients per layer (``[dW0, db0, dW1, db1, ...]``). Gradients of frozen
    layers are zeroed.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    if n == 0:
        raise ValueError("empty batch")
    logits, (pre, acts) = forward(net, X)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(log_z - shifted[np.arange(n), y]))

    delta = softmax(logits)
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads = [None] * (2 * net.arch.n_layers)
    for l in range(net.arch.n_layers - 1, -1, -1):
        grads[2 * l] = delta.T @ acts[l]
        grads[2 * l + 1] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ net.weights[l]) * (pre[l - 1] > 0)
    for l, frozen in enumerate(net.arch.frozen):
        if frozen:
            grads[2 * l] = np.zeros_like(grads[2 * l])
            grads[2 * l + 1] = np.zeros_like(grads[2 * l + 1])
    return loss, grads


def flatten_grads(grads):
    return np.concatenate([np.ravel(g) for g in grads])


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, n_params, lr=0.01, beta1=0.9, beta2=0.999, eps=1e-8):
        return cls(np.zeros(n_params), np.zeros(n_params), 0, lr, beta1, beta2, eps)


def adam_update(params, g, opt, mask=None):
    """Bias-corrected Adam update of a flat parameter array, in place.

    Entries where ``mask`` is false are left untouched.
    """
    if mask is not None:
        g = np.where(mask, g, 0.0)
    opt.t += 1
    opt.m = opt.beta1 * opt.m + (1 - opt.beta1) * g
    opt.v = opt.beta2 * opt.v + (1 - opt.beta2) * g * g
    c1 = 1.0 - opt.beta1**opt.t
    c2 = 1.0 - opt.beta2**opt.t
    step = opt.lr * (opt.m / c1) / (np.sqrt(opt.v / c2) + opt.eps)
    if mask is None:
        params -= step
    else:
        params[mask] -= step[mask]
    return params


def adam_step(net, grads, opt, mask=None):
    """One Adam update of the network, in place. Frozen layers never move."""
    g = grads if isinstance(grads, np.ndarray) else flatten_grads(grads)
    if g.shape != net.params.shape:
        raise ValueError("gradient shape does not match parameters")
    adam_update(net.params, g, opt, net.trainable_mask() if mask is None else mask)
    return net, opt


@njit(cache=True)
def _epoch_kernel(params, m, v, t, trainable, sizes, w_off, b_off, X, y, order,
                  batch_size, lr, beta1, beta2, eps):
    n_layers = sizes.shape[0] - 1
    u_off = np.zeros(n_layers + 2, dtype=np.int64)
    for l in range(n_layers + 1):
        u_off[l + 1] = u_off[l] + sizes[l]
    acts = np.zeros(u_off[n_layers + 1])
    delta = np.zeros(u_off[n_layers + 1])
    grad = np.zeros(params.shape[0])
    n_out = sizes[n_layers]
    o = u_off[n_layers]
    n = order.shape[0]
    loss_sum = 0.0
    for start in range(0, n, batch_size):
        stop = min(start + batch_size, n)
        bsz = stop - start
        grad[:] = 0.0
        for bi in range(start, stop):
            idx = order[bi]
            for k in range(sizes[0]):
                acts[k] = X[idx, k]
            for l in range(n_layers):
                fin = sizes[l]
                fout = sizes[l + 1]
                ai = u_off[l]
                ao = u_off[l + 1]
                for j in range(fout):
                    s = 0.0
                    row = w_off[l] + j * fin
                    for k in range(fin):
                        s += params[row + k] * acts[ai + k]
                    s += params[b_off[l] + j]
                    if l < n_layers - 1 and s <= 0.0:
                        s = 0.0
                    acts[ao + j] = s
            mx = acts[o]
            for j in range(1, n_out):
                if acts[o + j] > mx:
                    mx = acts[o + j]
            denom = 0.0
            for j in range(n_out):
                denom += math.exp(acts[o + j] - mx)
            label = y[idx]
            loss_sum += math.log(denom) - (acts[o + label] - mx)
            for j in range(n_out):
                p = math.exp(acts[o + j] - mx) / denom
                if j == label:
                    p -= 1.0
                delta[o + j] = p / bsz
            for l in range(n_layers - 1, -1, -1):
                fin = sizes[l]
                fout = sizes[l + 1]
                ai = u_off[l]
                ao = u_off[l + 1]
                for j in range(fout):
                    d = delta[ao + j]
                    grad[b_off[l] + j] += d
                    row = w_off[l] + j * fin
                    for k in range(fin):
                        grad[row + k] += d * acts[ai + k]
                if l > 0:
                    for k in range(fin):
                        if acts[ai + k] > 0.0:
                            s = 0.0
                            for j in range(fout):
                                s += params[w_off[l] + j * fin + k] * delta[ao + j]
                            delta[ai + k] = s
                        else:
                            delta[ai + k] = 0.0
        t += 1
        c1 = 1.0 - beta1**t
        c2 = 1.0 - beta2**t
        for i in range(params.shape[0]):
            if trainable[i]:
                g = grad[i]
                m[i] = beta1 * m[i] + (1 - beta1) * g
                v[i] = beta2 * v[i] + (1 - beta2) * g * g
                params[i] -= lr * (m[i] / c1) / (math.sqrt(v[i] / c2) + eps)
    return loss_sum / n, t


@dataclass
class TrainConfig:
    epochs: int = 300
    batch_size: int = 20
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    shuffle_seed: int = 1_000_000
    init_seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class Curves:
    train_error: list = field(default_factory=list)
    validation_error: list = field(default_factory=list)
    train_loss: list = field(default_factory=list)

    def to_dict(self):
        return {"train_error": list(self.train_error),
                "validation_error": list(self.validation_error),
                "train_loss": list(self.train_loss)}


def error_rate(net, X, y):
    return float(np.mean(predict(net, X) != y))


def _as_xy(ds):
    if isinstance(ds, tuple):
        X, y = ds
        return np.ascontiguousarray(X, dtype=np.float64), np.ascontiguousarray(y, dtype=np.int64)
    return ds.feature_matrix(), ds.labels()


def train(arch, cfg, train_ds, val_ds, backend="kernel"):
    """Train from a seeded initialisation. Returns ``(net, curves)``.

    Datasets may be :class:`~yinyang.sampler.Dataset` objects or ``(X, y)``
    tuples. Each epoch shuffles ``arange(n)`` with the shuffle stream, runs
    every mini-batch (the last one may be short) and records train and
    validation error at epoch end.
    """
    X, y = _as_xy(train_ds)
    Xv, yv = _as_xy(val_ds)
    net = init(arch, cfg.init_seed)
    curves = Curves()
    if cfg.epochs == 0:
        return net, curves
    opt = AdamState.fresh(net.params.size, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
    mask = net.trainable_mask()
    shuffler = Xoshiro256(cfg.shuffle_seed)
    sizes = np.array(arch.layer_sizes, dtype=np.int64)
    w_off, b_off, _ = arch.offsets()
    w_off = np.array(w_off, dtype=np.int64)
    b_off = np.array(b_off, dtype=np.int64)
    n = X.shape[0]
    for epoch in range(cfg.epochs):
        order = np.arange(n, dtype=np.int64)
        shuffler.shuffle(order)
        if backend == "kernel":
            loss, opt.t = _epoch_kernel(net.params, opt.m, opt.v, opt.t, mask, sizes, w_off, b_off,
                                        X, y, order, cfg.batch_size, opt.lr, opt.beta1, opt.beta2, opt.eps)
        elif backend == "numpy":
            loss = 0.0
            for start in range(0, n, cfg.batch_size):
                idx = order[start:start + cfg.batch_size]
                batch_loss, grads = loss_and_grad(net, X[idx], y[idx])
                loss += batch_loss * len(idx)
                adam_step(net, grads, opt, mask)
            loss /= n
        else:
            raise ValueError(f"unknown backend {backend!r}")
        if not (math.isfinite(loss) and np.all(np.isfinite(net.params))):
            raise TrainingDiverged(f"non-finite loss at epoch {epoch + 1}", cfg.init_seed)
        curves.train_loss.append(float(loss))
        curves.train_error.append(error_rate(net, X, y))
        curves.validation_error.append(error_rate(net, Xv, yv))
    return net, curves


@dataclass
class Evaluation:
    accuracy: float
    confusion: np.ndarray
    predictions: np.ndarray


def confusion_matrix(y_true, y_pred):
    """Counts with rows indexed by true class and columns by predicted class."""
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(confusion, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return confusion


def evaluate(net, ds):
    """Argmax predictions (ties go to the lowest class index), confusion and accuracy."""
    X, y = _as_xy(ds)
    pred = predict(net, X)
    confusion = confusion_matrix(y, pred)
    accuracy = float(np.trace(confusion) / len(y)) if len(y) else 0.0
    return Evaluation(accuracy, confusion, pred)
