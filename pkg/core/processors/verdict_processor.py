"""Module containing the processor which runs verification cases.

Cases are zero argument callables doing pure computation.  They are taken off
the queue by a fixed number of workers and run in a thread pool so the event
loop stays free for the loggers.  Results are kept by case index, so the
order of a run's output never depends on completion order.
"""
import asyncio
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Tuple
from core.errors import CaseFailure, WorkbenchError
from core.managers.logger_manager import logger_manager
from core.processors.processor_base import ProcessorBase

class VerdictProcessor(ProcessorBase):
    """Runs verification cases queued by the runner.

    Parameters
    ----------
    ProcessorBase : Class
        Abstract base class which VerdictProcessor inherits from

    Attributes
    ----------
    shutdown : bool
        Value to track whether processor should be shutdown, default as False
    queue: asyncio.Queue
        Queue which provides work to the processor
    results : dict
        Case index to (result list, error) pairs of the current run

    Methods
    -------
    process(index: int, case: Callable)
        Method which provides interface to add to queue
    run(workers: int)
        Initialize queue and workers, running cases in queue
    join()
        Wait until every queued case has run
    shutdown()
        Initiate shutdown of processor
    """
    def __init__(self):
        self.__shutdown = False
        self.__queue = None
        self.__results = {}
        self.__workers = 1

    async def process(self, index: int, case: Callable) -> None:
        """Interface to add work to processor queue.

        Parameters
        ----------
        index : int
            Position of the case in the run
        case : Callable
            Zero argument callable returning a list of records
        """
        await self.__queue.put((index, case))

    async def started(self) -> None:
        """Wait until run has created the queue."""
        while self.__queue is None:
            await asyncio.sleep(0)

    async def run(self, workers: int = 1) -> int:
        """Start the verdict processor. Initialize queue and workers, running cases until shutdown initiated.

        Parameters
        ----------
        workers : int
            Number of cases run at the same time

        Returns
        -------
        int
            Return code of processor, 0 being the only good return
        """
        self.__shutdown = False
        self.__results = {}
        self.__workers = max(1, workers)

        # queue must be created here to be in main event loop
        self.__queue = asyncio.Queue()

        with ThreadPoolExecutor(max_workers=self.__workers) as executor:
            await asyncio.gather(*(self._work(executor) for _ in range(self.__workers)))

        self.__queue = None

        # zero is a "good" return code
        return 0

    async def _work(self, executor: ThreadPoolExecutor) -> None:
        loop = asyncio.get_running_loop()

        # loop until shutdown is issued to instance
        while not self.__shutdown:
            index, case = await self._consume()

            # None is the shutdown sentinel
            if case is None:
                self.__queue.task_done()
                break

            await logger_manager.verification.info({'type': 'INFO', 'message': 'Case started.', 'case': index})
            started = time.perf_counter()

            try:
                result = await loop.run_in_executor(executor, case)
                self.__results[index] = (result, None)
                await logger_manager.verification.info({
                    'type': 'INFO',
                    'message': 'Case finished.',
                    'case': index,
                    'elapsed_ms': int((time.perf_counter() - started) * 1000)
                })
            except WorkbenchError as error:
                self.__results[index] = ([], error)
                await logger_manager.verification.error({'type': 'ERROR', 'message': str(error), 'case': index})
            except Exception as error:
                failure = CaseFailure(error)
                self.__results[index] = ([], failure)
                await logger_manager.verification.error({'type': 'ERROR', 'message': str(failure), 'case': index})
            finally:
                self.__queue.task_done()

    async def join(self) -> None:
        await self.__queue.join()

    def results(self) -> list[Tuple[list, Optional[WorkbenchError]]]:
        """Results of the current run ordered by case index."""
        return [self.__results[index] for index in sorted(self.__results)]

    async def shutdown(self) -> None:
        """Initiate shutdown of the verdict processor, one sentinel per worker.
        """
        self.__shutdown = True

        if self.__queue is None:
            return

        for _ in range(self.__workers):
            self.__queue.put_nowait((-1, None))

    async def _consume(self) -> Tuple[int, Callable]:
        """Consume work from queue.

        Returns
        -------
        Tuple[int, Callable]
            Tuple containing case index and the case to be run
        """
        return await self.__queue.get()

# Create instance of VerdictProcessor in module namespace
verdict_processor = VerdictProcessor()
