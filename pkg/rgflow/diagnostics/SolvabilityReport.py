import pandas

from rgflow import constants


class SolvabilityReport:
    """
    Used as output of SolvabilityChecker.solvability_check. A full rank outcome, where the retained subspaces fill
    most of the space, is reported as unstable with the full_rank flag set.
    """
    def __init__(self, verdict, full_rank, pairwise, retained_counts, subset_sizes, threshold):
        self.verdict = verdict
        self.full_rank = full_rank
        self.pairwise = pairwise
        self.retained_counts = retained_counts
        self.subset_sizes = subset_sizes
        self.threshold = threshold

    @property
    def is_stable(self):
        return self.verdict in (constants.VERDICT_STABLE, constants.VERDICT_TRIVIALLY_STABLE)

    @property
    def min_alignment(self):
        return min([value for _, _, value in self.pairwise], default=1.0)

    def to_dataframe(self):
        return pandas.DataFrame(self.pairwise, columns=["trial_a", "trial_b", "mean_top_alignment"])

    def summary(self):
        suffix = " (full rank)" if self.full_rank else ""
        return f"verdict={self.verdict}{suffix} min_alignment={self.min_alignment:.4f} " \
               f"retained={self.retained_counts} subset_sizes={self.subset_sizes}"
