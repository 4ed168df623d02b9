"""Node memory models and the trait states they feed to the transition rule.

Five models are supported.  All of them consume the state sequence one step
at a time and emit a binary trait per node:

- ahistoric: trait is the current state, no bookkeeping;
- majority over the last tau states (ring buffer + running window sum),
  ties resolved by keeping the current state;
- majority over the entire history (integer counts);
- alpha-weighted mean m = omega/Omega with omega <- alpha*omega + sigma and
  Omega <- alpha*Omega + 1, thresholded at 0.5 with the current state kept
  on a tie;
- parity of the last three states, bootstrapped as s1 = sigma1 and
  s2 = sigma1 xor sigma2.

States are recorded starting with the initial configuration, so after the
first update T = 1 and the window holds exactly that configuration.
"""

from dataclasses import dataclass

import mpmath
import numpy as np

__all__ = [
    "MemoryModel",
    "parse_memory_model",
    "make_memory_state",
    "memory_update",
    "critical_alpha",
    "ALPHA_TIE_TOL",
]

# Tie band for the alpha-weighted mean: floating accumulation cannot be
# trusted to hit 0.5 exactly, so |m - 0.5| <= tol counts as a tie.  For
# alpha = 1 the update is done in integer counts and ties are exact.
ALPHA_TIE_TOL = 1e-12


@dataclass(frozen=True)
class MemoryModel:
    """kind is one of ahistoric | tau_majority | full_majority | alpha |
    parity_window3; tau/alpha hold the respective parameter."""

    kind: str
    tau: int | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind == "tau_majority":
            if self.tau is None or self.tau < 1 or self.tau != int(self.tau):
                raise ValueError("tau_majority needs integer tau >= 1")
        elif self.kind == "alpha":
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise ValueError("alpha must lie in [0, 1]")
        elif self.kind not in ("ahistoric", "full_majority", "parity_window3"):
            raise ValueError(f"unknown memory kind: {self.kind!r}")

    def label(self) -> str:
        if self.kind == "tau_majority":
            return f"majority:{self.tau}"
        if self.kind == "full_majority":
            return "majority:full"
        if self.kind == "alpha":
            return f"alpha:{self.alpha:.17g}"
        if self.kind == "parity_window3":
            return "parity3"
        return "ahistoric"


def parse_memory_model(text: str) -> MemoryModel:
    """Parse the config syntax: ahistoric | majority:<tau> | majority:full
    | alpha:<value> | parity3."""
    t = text.strip()
    if t == "ahistoric":
        return MemoryModel(kind="ahistoric")
    if t == "parity3":
        return MemoryModel(kind="parity_window3")
    if t.startswith("majority:"):
        arg = t[len("majority:"):]
        if arg == "full":
            return MemoryModel(kind="full_majority")
        try:
            tau = int(arg)
        except ValueError:
            raise ValueError(f"bad tau in memory spec: {text!r}") from None
        return MemoryModel(kind="tau_majority", tau=tau)
    if t.startswith("alpha:"):
        try:
            a = float(t[len("alpha:"):])
        except ValueError:
            raise ValueError(f"bad alpha in memory spec: {text!r}") from None
        return MemoryModel(kind="alpha", alpha=a)
    raise ValueError(f"unknown memory spec: {text!r}")


class _AhistoricState:
    kind = "ahistoric"

    def __init__(self, n):
        self.n = n
        self.T = 0

    def update(self, sigma):
        self.T += 1
        return sigma.copy()


class _TauMajorityState:
    kind = "tau_majority"

    def __init__(self, n, tau):
        self.n = n
        self.tau = tau
        self.T = 0
        self.buf = np.zeros((tau, n), dtype=np.uint8)
        self.window_sum = np.zeros(n, dtype=np.int64)

    def update(self, sigma):
        self.T += 1
        slot = (self.T - 1) % self.tau
        if self.T > self.tau:
            self.window_sum -= self.buf[slot]
        self.buf[slot] = sigma
        self.window_sum += sigma
        w = min(self.T, self.tau)
        ones = self.window_sum
        return np.where(2 * ones > w, 1,
                        np.where(2 * ones < w, 0, sigma)).astype(np.uint8)


class _FullMajorityState:
    kind = "full_majority"

    def __init__(self, n):
        self.n = n
        self.T = 0
        self.ones = np.zeros(n, dtype=np.int64)

    def update(self, sigma):
        self.T += 1
        self.ones += sigma
        return np.where(2 * self.ones > self.T, 1,
                        np.where(2 * self.ones < self.T, 0, sigma)).astype(np.uint8)


class _AlphaState:
    kind = "alpha"

    def __init__(self, n, alpha):
        self.n = n
        self.alpha = alpha
        self.T = 0
        self.omega = np.zeros(n, dtype=np.float64)
        self.capacity = 0.0            # Omega, shared by every node

    def update(self, sigma):
        self.T += 1
        self.omega = self.alpha * self.omega + sigma
        self.capacity = self.alpha * self.capacity + 1.0
        m = self.omega / self.capacity
        return np.where(m > 0.5 + ALPHA_TIE_TOL, 1,
                        np.where(m < 0.5 - ALPHA_TIE_TOL, 0, sigma)).astype(np.uint8)


class _ParityWindow3State:
    kind = "parity_window3"

    def __init__(self, n):
        self.n = n
        self.T = 0
        self.last3 = np.zeros((3, n), dtype=np.uint8)

    def update(self, sigma):
        self.T += 1
        self.last3[(self.T - 1) % 3] = sigma
        if self.T == 1:
            return sigma.copy()
        if self.T == 2:
            return self.last3[0] ^ self.last3[1]
        return self.last3[0] ^ self.last3[1] ^ self.last3[2]


def make_memory_state(model: MemoryModel, n: int):
    """Fresh per-run memory bookkeeping for n nodes."""
    if model.kind == "ahistoric":
        return _AhistoricState(n)
    if model.kind == "tau_majority":
        return _TauMajorityState(n, model.tau)
    if model.kind == "full_majority":
        return _FullMajorityState(n)
    if model.kind == "alpha":
        # alpha = 1 weights every record equally; integer counts keep the
        # tie test exact instead of trusting accumulated floats
        if model.alpha == 1.0:
            return _FullMajorityState(n)
        return _AlphaState(n, model.alpha)
    if model.kind == "parity_window3":
        return _ParityWindow3State(n)
    raise ValueError(f"unknown memory kind: {model.kind!r}")


def memory_update(state, sigma_new, model: MemoryModel | None = None):
    """Record sigma_new into the memory state and return (state, trait).

    The state is updated in place; the tuple mirrors the functional
    contract.  sigma_new is a length-n binary vector.
    """
    sigma = np.ascontiguousarray(sigma_new, dtype=np.uint8)
    if sigma.shape != (state.n,):
        raise ValueError("state vector length does not match memory state")
    if (sigma > 1).any():
        raise ValueError("states must be binary")
    if model is not None:
        expected = model.kind
        if model.kind == "alpha" and model.alpha == 1.0:
            expected = "full_majority"
        if expected != state.kind:
            raise ValueError(
                f"memory state kind {state.kind!r} does not match model "
                f"{model.kind!r}")
    return state, state.update(sigma)


def critical_alpha(T: int):
    """The unique root of alpha^T - 2*alpha + 1 = 0 inside (0.5, 1).

    Below this value an alpha-memory cannot alter any trait within the
    first T steps.  Returns None for T < 3 (the equation has no root in
    the open interval).  The root approaches 0.5 like 2^-(T+1), far below
    float64 resolution for large T, so the bisection runs in mpmath with
    T-scaled precision and the result is an mpmath float.
    """
    if T != int(T):
        raise ValueError("T must be an integer")
    T = int(T)
    if T < 3:
        return None
    prec = max(80, T + 60)
    target = mpmath.mpf(2) ** -max(50, T + 20)
    with mpmath.workprec(prec):
        def f(a):
            return a ** T - 2 * a + 1

        lo = mpmath.mpf("0.5")               # f(lo) = 2^-T > 0
        hi = (mpmath.mpf(2) / T) ** (mpmath.mpf(1) / (T - 1))
        if not f(hi) < 0:
            raise ArithmeticError("bracket failure in critical_alpha")
        while hi - lo > target:
            mid = (lo + hi) / 2
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2
