class CovarianceModes:
    """
    Leading eigenpairs of a data covariance matrix, eigenvalues descending and eigenvectors as rows.
    """
    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors

    @property
    def count(self):
        return len(self.eigenvalues)
