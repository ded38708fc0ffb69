import numpy as np

from rgflow.rbm.CdGradient import CdGradient
from rgflow.rbm.DimensionMismatchError import DimensionMismatchError
from rgflow.rbm.RbmParams import RbmParams


class Rbm:
    """
    Restricted Boltzmann machine with ±1 visible and hidden units. Every operation accepts either a single state
    vector or a batch of them stacked in rows.

    The conditionals p(x = +1 | y) = (1 + tanh(a)) / 2 lie strictly in (0, 1) except when tanh saturates in floating
    point, where they become exactly 0 or 1.
    """
    @staticmethod
    def _check(states, expected, name):
        states = np.asarray(states, dtype=np.float64)
        if states.ndim not in (1, 2) or states.shape[-1] != expected:
            raise DimensionMismatchError(f"{name} states of shape {states.shape} do not match {expected} units")
        return states

    @staticmethod
    def rbm_energy(v, h, params: RbmParams):
        """
        E = -sum_ia v_i W_ia h_a - sum_i v_i b_i - sum_a h_a c_a
        """
        v = Rbm._check(v, params.visible_count, "Visible")
        h = Rbm._check(h, params.hidden_count, "Hidden")
        if v.ndim != h.ndim or (v.ndim == 2 and v.shape[0] != h.shape[0]):
            raise DimensionMismatchError("Visible and hidden batches differ in size")
        interaction = np.sum((v @ params.weights) * h, axis=-1)
        return -(interaction + v @ params.visible_bias + h @ params.hidden_bias)

    @staticmethod
    def hidden_activation_prob(v, params: RbmParams):
        v = Rbm._check(v, params.visible_count, "Visible")
        return 0.5 * (1.0 + np.tanh(v @ params.weights + params.hidden_bias))

    @staticmethod
    def visible_activation_prob(h, params: RbmParams):
        h = Rbm._check(h, params.hidden_count, "Hidden")
        return 0.5 * (1.0 + np.tanh(h @ params.weights.T + params.visible_bias))

    @staticmethod
    def sample_binary(probs, rng):
        """
        Draws +1 with probability probs[i] and -1 otherwise.
        @param probs: probabilities within [0, 1]
        @param rng: numpy Generator
        """
        probs = np.asarray(probs, dtype=np.float64)
        if not np.all((probs >= 0) & (probs <= 1)):
            raise ValueError("Probabilities must lie within [0, 1]")
        return np.where(rng.random(probs.shape) < probs, 1.0, -1.0)

    @staticmethod
    def cd1_arrays(batch, weights, visible_bias, hidden_bias, rng):
        hidden_data = np.where(rng.random((batch.shape[0], weights.shape[1])) <
                               0.5 * (1.0 + np.tanh(batch @ weights + hidden_bias)), 1.0, -1.0)
        visible_model = np.where(rng.random(batch.shape) <
                                 0.5 * (1.0 + np.tanh(hidden_data @ weights.T + visible_bias)), 1.0, -1.0)
        hidden_model = np.where(rng.random(hidden_data.shape) <
                                0.5 * (1.0 + np.tanh(visible_model @ weights + hidden_bias)), 1.0, -1.0)
        samples = batch.shape[0]
        weights_delta = (batch.T @ hidden_data - visible_model.T @ hidden_model) / samples
        visible_delta = np.mean(batch, axis=0) - np.mean(visible_model, axis=0)
        hidden_delta = np.mean(hidden_data, axis=0) - np.mean(hidden_model, axis=0)
        return weights_delta, visible_delta, hidden_delta

    @staticmethod
    def cd1_step(batch, params: RbmParams, rng):
        """
        One contrastive divergence round trip v -> h -> v' -> h' with sampled states, drawing the whole batch of h
        first, then v', then h'.
        @param batch: N_s × N_v visible vectors
        @param params: the current parameters
        @param rng: numpy Generator
        @return: the CdGradient of data minus model expectations averaged over the batch
        """
        batch = Rbm._check(batch, params.visible_count, "Visible")
        batch = np.atleast_2d(batch)
        if batch.shape[0] == 0:
            raise ValueError("Contrastive divergence needs a non empty batch")
        return CdGradient(*Rbm.cd1_arrays(batch, params.weights, params.visible_bias, params.hidden_bias, rng))

    @staticmethod
    def reconstruct(v, params: RbmParams):
        hidden_expectation = 2.0 * Rbm.hidden_activation_prob(v, params) - 1.0
        return Rbm.visible_activation_prob(hidden_expectation, params)

    @staticmethod
    def reconstruction_error(samples, params: RbmParams):
        """
        Mean squared difference between the samples and their expected reconstruction 2p - 1.
        """
        samples = Rbm._check(samples, params.visible_count, "Visible")
        return float(np.mean((samples - (2.0 * Rbm.reconstruct(samples, params) - 1.0)) ** 2))

    @staticmethod
    def free_energy(v, params: RbmParams):
        """
        F(v) = -v.b - sum_a log(2 cosh(v.W_a + c_a)), so that p(v) is proportional to exp(-F(v)).
        """
        v = Rbm._check(v, params.visible_count, "Visible")
        activation = v @ params.weights + params.hidden_bias
        return -(v @ params.visible_bias) - np.sum(np.logaddexp(activation, -activation), axis=-1)

    @staticmethod
    def gibbs_chain(v_start, params: RbmParams, steps: int, rng):
        """
        Block Gibbs sampling of parallel chains starting at v_start.
        @return: the final visible and hidden states after steps full updates
        """
        v = Rbm._check(v_start, params.visible_count, "Visible")
        h = Rbm.sample_binary(Rbm.hidden_activation_prob(v, params), rng)
        for _ in range(steps):
            v = Rbm.sample_binary(Rbm.visible_activation_prob(h, params), rng)
            h = Rbm.sample_binary(Rbm.hidden_activation_prob(v, params), rng)
        return v, h
