"""Run a fixture system as a standalone subprocess speaking the wire
protocol: python -m clinperturb.fixture_system --mode oracle --data gold.jsonl
"""

from __future__ import annotations

import argparse

from .adapters import MemorizerSystem, OracleSystem, PerceptronSystem, serve_stdio
from .corpus import read_samples


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="clinperturb-fixture-system")
    parser.add_argument("--mode", choices=["oracle", "memorizer", "perceptron"],
                        required=True)
    parser.add_argument("--data", required=True,
                        help="clean gold dataset (oracle/memorizer) or train split (perceptron)")
    parser.add_argument("--task", help="task for perceptron mode")
    args = parser.parse_args(argv)

    samples = read_samples(args.data)
    if args.mode == "oracle":
        system = OracleSystem(samples)
    elif args.mode == "memorizer":
        system = MemorizerSystem(samples)
    else:
        if not args.task:
            parser.error("--task is required for perceptron mode")
        system = PerceptronSystem([s for s in samples if s.task == args.task],
                                  args.task)
    serve_stdio(system)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
