import textwrap

from attr import attrib, attrs


class MonotonePSSWarning(UserWarning):
    __module__ = "monotone_pss"


@attrs
class StepSizeWarning(MonotonePSSWarning):
    __module__ = "monotone_pss"

    alpha = attrib()
    coercivity = attrib()
    lipschitz = attrib()

    def __str__(self):
        return textwrap.dedent(
            f"""\
        Forward step size {self.alpha:.6g} is outside the guaranteed window (0, 2m/L^2):
            m={self.coercivity:.6g} L={self.lipschitz:.6g} bound={2 * self.coercivity / self.lipschitz ** 2:.6g}
        """
        )


@attrs
class PartialSolutionWarning(MonotonePSSWarning):
    __module__ = "monotone_pss"

    iterations = attrib()
    residual = attrib()

    def __str__(self):
        return f"Writing a non-converged trajectory after {self.iterations} iterations (residual {self.residual:.3e})"
