from rgflow import constants
from rgflow.coarsegrain.BlockSpinSpec import BlockSpinSpec


class RgmConfig:
    def __init__(self, visible_side: int, hidden_side: int, kappa: int = None, alpha: int = None,
                 block_spec: BlockSpinSpec = None, gain: float = constants.DEFAULT_RGM_GAIN,
                 eigen_floor: float = constants.DEFAULT_EIGEN_FLOOR):
        """
        @param visible_side: the visible lattice side L_v
        @param hidden_side: the hidden lattice side L_h
        @param kappa: retained covariance modes, the count of eigenvalues above eigen_floor times the largest when
        missing
        @param alpha: Fourier cutoff per axis, round(10 * L_v / 80) when missing
        @param block_spec: block spin rule used to estimate singular values, 4×4 blocks at stride L_v / L_h when missing
        @param gain: global factor applied to the assembled weights
        @param eigen_floor: relative eigenvalue floor of the kappa heuristic
        """
        if hidden_side < 1 or visible_side < hidden_side:
            raise ValueError(f"Hidden side {hidden_side} must be positive and not above visible side {visible_side}")
        if alpha is None:
            alpha = RgmConfig.default_alpha(visible_side)
        if alpha < 0 or alpha > hidden_side:
            raise ValueError(f"alpha must lie within 0..{hidden_side}, got {alpha}")
        if kappa is not None and (kappa < 0 or kappa > hidden_side ** 2):
            raise ValueError(f"kappa must lie within 0..{hidden_side ** 2}, got {kappa}")
        if block_spec is None:
            if visible_side % hidden_side != 0:
                raise ValueError(f"Visible side {visible_side} is not a multiple of hidden side {hidden_side}")
            block_spec = BlockSpinSpec(visible_side, constants.DEFAULT_RGM_BLOCK_SIZE, visible_side // hidden_side)
        if block_spec.visible_side != visible_side or block_spec.hidden_side != hidden_side:
            raise ValueError(f"{block_spec} does not map {visible_side} onto {hidden_side}")
        self.visible_side = int(visible_side)
        self.hidden_side = int(hidden_side)
        self.kappa = kappa
        self.alpha = int(alpha)
        self.block_spec = block_spec
        self.gain = float(gain)
        self.eigen_floor = float(eigen_floor)

    @staticmethod
    def default_alpha(visible_side: int):
        return max(1, int(round(constants.REFERENCE_ALPHA * visible_side / constants.REFERENCE_VISIBLE_SIDE)))
