""" Utilities for running independent experiment jobs in parallel processes. """
import sys
import traceback
import multiprocessing as mp
from enum import Enum
from typing import Any, Callable, Iterator, List, Optional
from concurrent.futures import TimeoutError

import attrs
import tqdm
from pebble import ProcessPool, ProcessExpired


class JobStatus(Enum):
    SUCCESS = 0
    EXCEPTION = 1
    TIMEOUT = 2
    PROCESS_EXPIRED = 3


@attrs.define(eq=False, repr=False)
class JobResult:
    status: JobStatus
    job: Any = None

    result: Optional[Any] = None
    exception_tb: Optional[str] = None

    def is_success(self) -> bool:
        return self.status == JobStatus.SUCCESS


def run_jobs_in_parallel_iter(
    func: Callable,
    jobs: List[Any],
    num_workers: int = 2,
    timeout_per_job: Optional[int] = None,
    use_progress_bar: bool = False,
    progress_bar_desc: Optional[str] = None,
    use_spawn: bool = True,
) -> Iterator[JobResult]:
    """
    Args:
        func: The function to run. It must accept a single, picklable argument.
        jobs: The arguments to ``func``, one per job.
        num_workers: Maximum number of worker processes.
        timeout_per_job: Timeout in seconds per job, None for no limit.
        use_progress_bar: Whether to show a tqdm bar.
        progress_bar_desc: Label of the progress bar.
        use_spawn: Use the 'spawn' start method ('fork' otherwise).
    Yields:
        One JobResult per job, in job order.
    """
    mode = "spawn" if use_spawn else "fork"

    with ProcessPool(max_workers=num_workers, context=mp.get_context(mode)) as pool:
        future = pool.map(func, jobs, timeout=timeout_per_job)
        iterator = future.result()

        pbar = None
        if use_progress_bar:
            pbar = tqdm.tqdm(
                desc=progress_bar_desc,
                total=len(jobs),
                dynamic_ncols=True,
                file=sys.stdout,
            )

        succ = failures = 0
        for job in jobs:
            try:
                result = next(iterator)
            except StopIteration:
                break
            except TimeoutError:
                yield JobResult(status=JobStatus.TIMEOUT, job=job)
                failures += 1
            except ProcessExpired:
                yield JobResult(status=JobStatus.PROCESS_EXPIRED, job=job)
                failures += 1
            except Exception:
                yield JobResult(
                    status=JobStatus.EXCEPTION,
                    job=job,
                    exception_tb=traceback.format_exc(),
                )
                failures += 1
            else:
                yield JobResult(status=JobStatus.SUCCESS, job=job, result=result)
                succ += 1

            if pbar is not None:
                pbar.update(1)
                pbar.set_postfix(succ=succ, failed=failures)
        if pbar is not None:
            pbar.close()


def run_jobs_in_parallel(
    func: Callable,
    jobs: List[Any],
    num_workers: int = 2,
    timeout_per_job: Optional[int] = None,
    use_progress_bar: bool = False,
    progress_bar_desc: Optional[str] = None,
    use_spawn: bool = True,
) -> List[JobResult]:
    return list(
        run_jobs_in_parallel_iter(
            func=func,
            jobs=jobs,
            num_workers=num_workers,
            timeout_per_job=timeout_per_job,
            use_progress_bar=use_progress_bar,
            progress_bar_desc=progress_bar_desc,
            use_spawn=use_spawn,
        )
    )
