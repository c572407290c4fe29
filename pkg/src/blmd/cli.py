"""Command-line entry point.

Verbs:
    run      -c config.json            full pipeline, artifacts + report
    phantom  -c config.json            emit the ground-truth cube only
    metrics  -c config.json --recon p  re-score an existing reconstruction

Exit codes: 0 success, 1 configuration error, 2 runtime/numerical error;
stderr carries the failing stage name.
"""

import argparse
import json
import sys

from .errors import ConfigError
from .pipeline import PipelineError, emit_phantom, load_config, rescore, run_pipeline


def _parser():
    parser = argparse.ArgumentParser(
        prog="blmd",
        description="Bilinear manifold-model recovery of undersampled dynamic MRI",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("run", "run the full pipeline"),
        ("phantom", "emit the ground-truth phantom only"),
        ("metrics", "re-score an existing reconstruction"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("-c", "--config", required=True, help="JSON config file")
        if name == "metrics":
            p.add_argument("--recon", required=True, help="reconstruction .blmd file")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            report = run_pipeline(cfg)
            print(
                f"wrote {cfg.output_dir}/report.json  "
                f"bilinear NRMSE {report['bilinear']['nrmse']:.4f}  "
                f"baseline NRMSE {report['baseline']['nrmse']:.4f}  "
                f"acceleration {report['acceleration_achieved']:.2f}x"
            )
        elif args.command == "phantom":
            path = emit_phantom(cfg)
            print(f"wrote {path}")
        else:
            print(json.dumps(rescore(cfg, args.recon), indent=2, sort_keys=True))
        return 0
    except ConfigError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        code = 1 if isinstance(exc.cause, ConfigError) else 2
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return code
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error [internal]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
