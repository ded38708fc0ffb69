class TrainResult:
    """
    Used as output of the RbmTrainer methods to unify the trained parameters with their loss history. The history
    starts with the reconstruction error before training followed by one entry per epoch.
    """
    def __init__(self, params, loss_history, config):
        self.params = params
        self.loss_history = loss_history
        self.config = config
