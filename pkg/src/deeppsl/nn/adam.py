"""Adam with bias correction, matching the common framework defaults:
update = lr * m_hat / (sqrt(v_hat) + eps), weight decay folded into the
gradient."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mlp import MlpGrads, MlpParams


@dataclass(eq=False)
class Adam:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    t: int = 0
    _m: MlpGrads | None = field(default=None, repr=False)
    _v: MlpGrads | None = field(default=None, repr=False)

    def _ensure_state(self, params: MlpParams):
        if self._m is None:
            self._m = MlpGrads([np.zeros_like(w) for w in params.weights],
                               [np.zeros_like(b) for b in params.biases])
            self._v = MlpGrads([np.zeros_like(w) for w in params.weights],
                               [np.zeros_like(b) for b in params.biases])

    def step(self, params: MlpParams, grads: MlpGrads) -> MlpParams:
        """One update; returns new parameters, advances the moment state."""
        self._ensure_state(params)
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t

        def upd(p, g, m, v):
            if self.weight_decay != 0.0:
                g = g + self.weight_decay * p
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            m_hat = m / bc1
            v_hat = v / bc2
            return p - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)

        new_w = [upd(p, g, m, v) for p, g, m, v in
                 zip(params.weights, grads.weights, self._m.weights, self._v.weights)]
        new_b = [upd(p, g, m, v) for p, g, m, v in
                 zip(params.biases, grads.biases, self._m.biases, self._v.biases)]
        return MlpParams(weights=new_w, biases=new_b,
                         activations=list(params.activations))
