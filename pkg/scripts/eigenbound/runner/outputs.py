import csv
import json

from eigenbound.bounds.reports import format_float, write_reports_csv, write_reports_json
from eigenbound.fields.constants import NUMERIC
from eigenbound.utils.path_utils import get_output_path

SPECTRUM_COLUMNS = ["i", "sigma", "divnorm", "t_energy", "residual"]


def write_spectrum_csv(result, path: str) -> str:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SPECTRUM_COLUMNS)
        energies = [None] * len(result.sigmas) if result.t_energy is None else result.t_energy
        rows = zip(result.sigmas, result.divnorms, energies, result.residuals)
        for i, (s, d, e, r) in enumerate(rows, start=1):
            energy = "" if e is None else format_float(e)
            writer.writerow([i, format_float(s), format_float(d), energy, format_float(r)])
    return path


def constants_payload(result) -> dict:
    payload = result.constants.to_dict()
    provenance = dict(payload.pop("provenance"))
    shift = provenance.get("C0", NUMERIC)
    # D0 and D1 read divnorms, which are numeric whenever alpha > 0
    shift = shift if result.config.alpha == 0 else NUMERIC
    payload["D0"] = result.D0
    payload["D1"] = result.D1
    provenance["D0"] = shift
    provenance["D1"] = shift
    payload["provenance"] = provenance
    payload["method"] = result.method
    return payload


def write_constants_json(result, path: str) -> str:
    with open(path, "w") as f:
        json.dump(constants_payload(result), f, indent=4)
    return path


def write_outputs(result, out_dir: str, plots: bool = False) -> list[str]:
    written = [
        write_spectrum_csv(result, get_output_path(out_dir, "spectrum.csv")),
        write_reports_csv(result.reports, get_output_path(out_dir, "bounds.csv")),
        write_reports_json(result.reports, get_output_path(out_dir, "bounds.json")),
        write_constants_json(result, get_output_path(out_dir, "constants.json")),
    ]
    if plots:
        from eigenbound.runner.plots import plot_margins

        written.append(plot_margins(result.reports, get_output_path(out_dir, "margins.svg"), result.config.name))
    return written
