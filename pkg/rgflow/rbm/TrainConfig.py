INIT_MODES = ("xavier", "block_spin", "rgm", "explicit")
FEED_MODES = ("expected", "sampled")


class TrainConfig:
    def __init__(self, learning_rate: float = 1e-3, batch_size: int = 1000, epochs: int = 1, rng_seed: int = 0,
                 init_mode: str = "xavier", init_gain: float = None, init_block_size: int = None,
                 init_path: str = None, stacked_feed: str = "expected"):
        """
        @param learning_rate: the step applied as param += learning_rate * gradient
        @param batch_size: samples per contrastive divergence step
        @param epochs: full passes over the dataset, 0 returns the initial parameters
        @param rng_seed: the seed for shuffling, sampling and random initialization
        @param init_mode: xavier, block_spin, rgm or explicit
        @param init_gain: factor applied to block spin initial weights, 1 / B² when missing
        @param init_block_size: block size of the block spin initializer, the lattice stride when missing
        @param init_path: RBMW file holding the initial parameters for the rgm and explicit modes
        @param stacked_feed: whether stacked layers receive expected or sampled hidden states
        """
        if not learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {learning_rate}")
        if batch_size < 1:
            raise ValueError(f"batch_size must be at least 1, got {batch_size}")
        if epochs < 0:
            raise ValueError(f"epochs must be non-negative, got {epochs}")
        if init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}, got {init_mode}")
        if init_mode == "explicit" and init_path is None:
            raise ValueError("init_mode explicit needs an init_path")
        if init_block_size is not None and init_block_size < 1:
            raise ValueError(f"init_block_size must be positive, got {init_block_size}")
        if stacked_feed not in FEED_MODES:
            raise ValueError(f"stacked_feed must be one of {FEED_MODES}, got {stacked_feed}")
        self.learning_rate = float(learning_rate)
        self.batch_size = int(batch_size)
        self.epochs = int(epochs)
        self.rng_seed = int(rng_seed)
        self.init_mode = init_mode
        self.init_gain = init_gain
        self.init_block_size = init_block_size
        self.init_path = init_path
        self.stacked_feed = stacked_feed
