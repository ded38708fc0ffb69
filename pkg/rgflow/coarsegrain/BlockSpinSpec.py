from rgflow import constants


class BlockSpinSpec:
    """
    Block spin rule on a square lattice: the block of output site (b, c) has its top-left corner at visible site
    (b * stride, c * stride) and spans block_size sites per axis. Sites falling outside the lattice are discarded,
    blocks never wrap around.
    """
    ANCHOR = "top_left"
    EDGE_RULE = "discard"

    def __init__(self, visible_side: int, block_size: int, stride: int = constants.DEFAULT_BLOCK_STRIDE):
        if block_size < 1:
            raise ValueError(f"block_size must be at least 1, got {block_size}")
        if stride < 1:
            raise ValueError(f"stride must be at least 1, got {stride}")
        if visible_side < 1 or visible_side % stride != 0:
            raise ValueError(f"stride {stride} does not divide the visible side {visible_side}")
        self.visible_side = int(visible_side)
        self.block_size = int(block_size)
        self.stride = int(stride)

    @property
    def hidden_side(self):
        return self.visible_side // self.stride

    @property
    def overlapping(self):
        return self.block_size > self.stride

    def __repr__(self):
        return f"BlockSpinSpec(visible_side={self.visible_side}, block_size={self.block_size}, stride={self.stride})"
