"""This module contains the base class for processors.

ProcessorBase is an abstract baseclass to guarantee a base interface for processors which inherit from it.
"""
from __future__ import annotations
from abc import ABC, abstractmethod
from typing import Callable, Tuple

class ProcessorBase(ABC):
    """Base class for processors.

    Parameters
    ----------
    ABC : Class
        Inherits from ABC (abstract base class)
    """
    @abstractmethod
    async def process(self, index: int, case: Callable):
        """Interface to add work to processor queue.

        Parameters
        ----------
        index : int
            Position of the case in the run, used to order results
        case : Callable
            Zero argument callable doing the work
        """
        pass

    @abstractmethod
    async def run(self) -> int:
        """Start the processor. Initialize queue and loop, processing work in queue until shutdown initiated.

        Returns
        -------
        int
            Return code of processor, 0 being the only good return
        """
        pass

    @abstractmethod
    async def shutdown(self) -> None:
        """Initiate shutdown of the processor.
        """
        pass

    @abstractmethod
    async def _consume(self) -> Tuple[int, Callable]:
        """Consume work from queue.

        Returns
        -------
        Tuple[int, Callable]
            Tuple containing case index and the case to be run
        """
        pass
