"""Run managers with a concurrency limit, a pending queue and completion callbacks."""

import logging
import threading
from abc import ABC, abstractmethod
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

logger = logging.getLogger(__name__)

# callback(key, result, error message)
RunCallback = Callable[[int, Optional[Any], Optional[str]], None]


@dataclass
class RunJob:
    key: int
    fn: Callable[..., Any]
    args: Tuple[Any, ...]
    callback: RunCallback
    future: Optional[Future] = field(default=None, repr=False)


class AbstractRunManager(ABC):
    """Base class for run managers that cap the number of jobs in flight."""

    def __init__(self, max_concurrent_workers: int = 8):
        """Initialize with a concurrent job limit.

        Args:
            max_concurrent_workers: Maximum number of jobs running simultaneously.
        """
        if max_concurrent_workers < 1:
            raise ValueError("max_concurrent_workers must be at least 1")
        self._max_concurrent = max_concurrent_workers
        self._active_jobs: List[RunJob] = []
        self._pending_queue: List[RunJob] = []
        self._lock = threading.RLock()
        self._idle = threading.Condition(self._lock)
        self._outstanding = 0

    def submit(self, key: int, fn: Callable[..., Any], args: Tuple[Any, ...], callback: RunCallback) -> None:
        """Start ``fn(*args)`` now, or queue it when the limit is reached."""
        job = RunJob(key=key, fn=fn, args=args, callback=self._create_callback_wrapper(callback))
        with self._lock:
            self._outstanding += 1
            if len(self._active_jobs) < self._max_concurrent:
                self._active_jobs.append(job)
            else:
                self._pending_queue.append(job)
                return
        self._start_job(job)

    @abstractmethod
    def _start_job(self, job: RunJob) -> None:
        """Run or schedule one job; must eventually invoke ``job.callback``."""

    @abstractmethod
    def _is_job_active(self, job: RunJob) -> bool:
        pass

    @abstractmethod
    def _cancel_job(self, job: RunJob) -> None:
        pass

    def _create_callback_wrapper(self, original_callback: RunCallback) -> RunCallback:
        def wrapped_callback(key: int, result: Optional[Any], error: Optional[str]) -> None:
            try:
                original_callback(key, result, error)
            finally:
                with self._lock:
                    self._outstanding -= 1
                    self._idle.notify_all()
                self._on_job_completed()

        return wrapped_callback

    def _on_job_completed(self) -> None:
        """Drop finished jobs and start queued ones while slots are free."""
        with self._lock:
            self._active_jobs = [job for job in self._active_jobs if self._is_job_active(job)]
        self._process_pending_queue()

    def _process_pending_queue(self) -> None:
        while True:
            with self._lock:
                if not self._pending_queue or len(self._active_jobs) >= self._max_concurrent:
                    return
                job = self._pending_queue.pop(0)
                self._active_jobs.append(job)
            self._start_job(job)

    def clear_jobs(self) -> None:
        """Cancel active jobs and drop the pending queue."""
        with self._lock:
            for job in self._active_jobs:
                self._cancel_job(job)
            self._active_jobs.clear()
            self._pending_queue.clear()
            self._outstanding = 0
            self._idle.notify_all()

    def wait(self) -> None:
        """Block until every submitted job has reported back."""
        with self._idle:
            self._idle.wait_for(lambda: self._outstanding == 0)

    def shutdown(self) -> None:
        self.clear_jobs()

    def get_status(self) -> Dict[str, Any]:
        with self._lock:
            return {
                "active_jobs": len(self._active_jobs),
                "pending_queue": len(self._pending_queue),
                "max_concurrent": self._max_concurrent,
                "class_name": self.__class__.__name__,
            }

    def set_max_concurrent_workers(self, max_workers: int) -> None:
        if max_workers < 1:
            raise ValueError("max_concurrent_workers must be at least 1")
        with self._lock:
            old_max = self._max_concurrent
            self._max_concurrent = max_workers
        if max_workers > old_max:
            self._process_pending_queue()


class SerialRunManager(AbstractRunManager):
    """Runs every job in the calling thread, in submission order."""

    def __init__(self):
        super().__init__(max_concurrent_workers=1)
        self._running: Optional[RunJob] = None

    def _start_job(self, job: RunJob) -> None:
        self._running = job
        try:
            result, error = job.fn(*job.args), None
        except Exception as e:
            logger.debug(f"Job {job.key} raised {e!r}")
            result, error = None, f"{type(e).__name__}: {e}"
        self._running = None
        job.callback(job.key, result, error)

    def _is_job_active(self, job: RunJob) -> bool:
        return job is self._running

    def _cancel_job(self, job: RunJob) -> None:
        pass


class PoolRunManager(AbstractRunManager):
    """Runs jobs in a process pool; ``fn`` and its arguments must be picklable."""

    def __init__(self, max_concurrent_workers: int = 4):
        super().__init__(max_concurrent_workers)
        self._executor = ProcessPoolExecutor(max_workers=max_concurrent_workers)

    def _start_job(self, job: RunJob) -> None:
        job.future = self._executor.submit(job.fn, *job.args)
        job.future.add_done_callback(lambda future, job=job: self._finish(job, future))

    def _finish(self, job: RunJob, future: Future) -> None:
        if future.cancelled():
            return
        error = future.exception()
        if error is not None:
            logger.debug(f"Job {job.key} raised {error!r}")
            job.callback(job.key, None, f"{type(error).__name__}: {error}")
        else:
            job.callback(job.key, future.result(), None)

    def _is_job_active(self, job: RunJob) -> bool:
        # a job without a future is still being submitted
        return job.future is None or not job.future.done()

    def _cancel_job(self, job: RunJob) -> None:
        if job.future is not None:
            job.future.cancel()

    def shutdown(self) -> None:
        super().shutdown()
        self._executor.shutdown(wait=True, cancel_futures=True)


def create_run_manager(workers: int = 0) -> AbstractRunManager:
    """Serial manager for ``workers <= 1``, a process pool otherwise."""
    if workers <= 1:
        return SerialRunManager()
    return PoolRunManager(max_concurrent_workers=workers)
