"""Command-line entry point: load CSV/JSON inputs and serve the API."""

import argparse
from pathlib import Path

from .ingest import parse_activity_csv, parse_employees_csv, validate_dataset
from .metrics import load_weight_profile
from .server import Dataset, create_app


def load_dataset(records_path, employees_path, profile_path, dataset_id="default") -> Dataset:
    records = parse_activity_csv(Path(records_path).read_text())
    employees = parse_employees_csv(Path(employees_path).read_text())
    profile = load_weight_profile(Path(profile_path).read_text())
    report = validate_dataset(records, employees, profile)
    for finding in report.findings:
        print(f"warning: {finding.message}")
    return Dataset(
        dataset_id=dataset_id, records=records, employees=employees, profile=profile
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orgmetrics-server",
        description="Serve performance view models over HTTP",
    )
    parser.add_argument("--records", required=True, help="activity records CSV")
    parser.add_argument("--employees", required=True, help="employee roster CSV")
    parser.add_argument("--profile", required=True, help="weight profile JSON")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--seed", type=int, default=0, help="seed for clustering/projection")
    parser.add_argument("--ui", default=None, help="directory of built UI assets to serve at /ui")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    dataset = load_dataset(args.records, args.employees, args.profile)

    ui_dir = args.ui
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            ui_dir = candidate
    app = create_app({dataset.dataset_id: dataset}, seed=args.seed, ui_dir=ui_dir)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
