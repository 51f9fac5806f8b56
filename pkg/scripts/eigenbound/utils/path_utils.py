import os
import pathlib


def ensure_dir(path: str, is_file=True):
    if is_file:
        pathlib.Path(path).parent.mkdir(parents=True, exist_ok=True)
    else:
        pathlib.Path(path).mkdir(parents=True, exist_ok=True)
    return


def get_output_path(out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    ensure_dir(path)
    return path


def get_case_output_dir(out_dir: str, case_name: str, nested: bool) -> str:
    """Builtin cases write straight into ``out_dir`` unless several cases share it."""
    path = os.path.join(out_dir, case_name) if nested else out_dir
    ensure_dir(path, is_file=False)
    return path
