"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A numeric parameter is outside its valid range."""


class NotStochasticError(ValueError):
    """A matrix is not row-stochastic."""


class NotIrreducibleError(ValueError):
    """The chain has no unique stationary distribution."""


class ConvergenceError(RuntimeError):
    """An iterative or numerical solve failed to reach its tolerance."""


class PartitionError(ValueError):
    """A state partition does not cover the chain's states disjointly."""


class ScenarioError(ValueError):
    """A scenario document failed to parse or validate.

    Carries one message per offending field so a CLI can print them all.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
