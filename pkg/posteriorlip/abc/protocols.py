"""Structural type of posterior kernels."""

import typing


@typing.runtime_checkable
class KernelProtocol(typing.Protocol):
    """A map from data points to probability measures."""

    @property
    def data_box(self) -> list[tuple[float, float]]:
        """Default box of data points."""
        ...

    @property
    def data_dim(self) -> int:
        """Dimension of one data point."""
        ...

    def evaluate(self, x: typing.Any) -> typing.Any:
        """The measure π(·|x)."""
        ...
