class CdGradient:
    """
    Data minus model expectations of one contrastive divergence step
    """
    def __init__(self, weights, visible_bias, hidden_bias):
        self.weights = weights
        self.visible_bias = visible_bias
        self.hidden_bias = hidden_bias

    def as_tuple(self):
        return self.weights, self.visible_bias, self.hidden_bias
