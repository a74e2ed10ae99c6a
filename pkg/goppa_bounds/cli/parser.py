"""Argument parsing and the validated run configuration."""

import argparse
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from goppa_bounds import __version__
from goppa_bounds.core.config import Settings
from goppa_bounds.core.exceptions import ParameterError
from goppa_bounds.services.fields import Backend, TowerParams, split_prime_power

Command = Literal["bound", "verify", "matrices", "code", "scan"]

DEFAULT_SCAN_FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9, 11)


class RunConfig(BaseModel):
    """Resolved options for one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Command
    p: Optional[int] = None
    t: Optional[int] = None
    n: Optional[int] = None
    r: Optional[int] = None
    k: Optional[int] = None
    alpha: Optional[int] = None
    budget_bits: int = Field(ge=1, le=40)
    backend: Backend = Backend.AUTO
    output_format: Literal["human", "structured"] = "human"
    cache_dir: Optional[Path] = None
    workers: int = Field(ge=1)
    timestamps: bool = False

    # verify
    dump: bool = False
    # code
    extend: bool = False
    witnesses: tuple[Literal["frobenius", "affine"], ...] = ()
    frobenius_power: int = 1
    affine_a: Optional[int] = None
    affine_b: Optional[int] = None
    # scan
    field_sizes: tuple[int, ...] = DEFAULT_SCAN_FIELD_SIZES
    prime_limit: int = 13
    csv: Optional[Path] = None

    out: Path = Path("out")

    @property
    def q(self) -> Optional[int]:
        if self.p is None or self.t is None:
            return None
        return self.p**self.t

    @property
    def budget(self) -> int:
        return 1 << self.budget_bits

    @property
    def structured(self) -> bool:
        return self.output_format == "structured"

    def tower_params(self) -> TowerParams:
        if None in (self.p, self.t, self.n, self.r):
            raise ParameterError(f"{self.command} needs --q (or --p/--t), --n and --r")
        return TowerParams(p=self.p, t=self.t, n=self.n, r=self.r)

    def describe(self) -> str:
        parts = [f"{name}={getattr(self, name)}" for name in ("q", "n", "r", "k", "alpha") if getattr(self, name) is not None]
        if self.command == "verify":
            parts.append(f"budget=2^{self.budget_bits}")
        return " ".join(parts)

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: Settings) -> "RunConfig":
        """Merge parsed flags over settings and resolve q into (p, t).

        Raises:
            ParameterError: inconsistent or invalid field parameters.
        """
        p, t = _resolve_field(args.q, args.p, args.t)
        values = dict(
            command=args.command,
            p=p,
            t=t,
            n=args.n,
            r=getattr(args, "r", None),
            budget_bits=args.budget if args.budget is not None else settings.oracle_budget_bits,
            backend=Backend(args.backend),
            output_format=args.format,
            cache_dir=args.cache_dir if args.cache_dir is not None else settings.cache_dir,
            workers=args.workers or settings.workers,
            timestamps=args.timestamps,
            out=getattr(args, "out", None) or settings.output_dir,
        )
        match args.command:
            case "matrices":
                values.update(k=args.k, n=args.n or 1)
            case "verify":
                values.update(dump=args.dump)
            case "code":
                values.update(
                    alpha=args.alpha,
                    extend=args.extend,
                    witnesses=tuple(args.witness or ()),
                    frobenius_power=args.power,
                    affine_a=args.a,
                    affine_b=args.b,
                )
            case "scan":
                values.update(
                    field_sizes=tuple(args.field_sizes or DEFAULT_SCAN_FIELD_SIZES),
                    prime_limit=args.limit,
                    csv=args.csv,
                )
        try:
            config = cls(**values)
        except ValidationError as e:
            raise ParameterError("invalid options", detail=str(e)) from e
        if config.command in ("bound", "verify", "code"):
            config.tower_params()
        if config.command == "matrices" and (config.q is None or config.k is None):
            raise ParameterError("matrices needs --q and --k")
        if config.command == "scan":
            for size in config.field_sizes:
                split_prime_power(size)
        return config


def _resolve_field(q: Optional[int], p: Optional[int], t: Optional[int]) -> tuple[Optional[int], Optional[int]]:
    if q is not None:
        qp, qt = split_prime_power(q)
        if (p is not None and p != qp) or (t is not None and t != qt):
            raise ParameterError(f"--q {q} disagrees with --p/--t", detail=f"q = {qp}^{qt}")
        return qp, qt
    if p is None:
        return None, None
    return p, t if t is not None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goppa-bounds",
        description=(
            "Upper bounds on the number of extended irreducible Goppa codes, "
            "verified by exhaustive orbit enumeration."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size q = p^t")
    common.add_argument("--p", type=int, help="characteristic (with --t, instead of --q)")
    common.add_argument("--t", type=int, help="q = p^t")
    common.add_argument("--n", type=int, help="prime n")
    common.add_argument("--budget", type=int, metavar="BITS", help="enumeration budget 2^BITS")
    common.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.AUTO.value)
    common.add_argument("--format", choices=["human", "structured"], default="human")
    common.add_argument("--cache-dir", type=Path, help="tower cache directory")
    common.add_argument("--workers", type=int, help="oracle worker threads")
    common.add_argument("--timestamps", action="store_true", help="include time and run ID in reports")

    with_r = argparse.ArgumentParser(add_help=False)
    with_r.add_argument("--r", type=int, help="odd prime r")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bound", parents=[common, with_r], help="closed-form bounds and fixed-set table")

    verify = sub.add_parser("verify", parents=[common, with_r], help="exhaustive oracle verification")
    verify.add_argument("--dump", action="store_true", help="write partition dumps to --out")
    verify.add_argument("--out", type=Path, help="output directory")

    matrices = sub.add_parser("matrices", parents=[common], help="matrices of order k in GL(2, q^n)")
    matrices.add_argument("--k", type=int, required=True, help="matrix order")

    code = sub.add_parser("code", parents=[common, with_r], help="parity matrix of C(α)")
    code.add_argument("--alpha", type=int, required=True, help="element handle in S")
    code.add_argument("--extend", action="store_true", help="also check the extended code")
    code.add_argument("--witness", action="append", choices=["frobenius", "affine"], help="certificate to verify")
    code.add_argument("--power", type=int, default=1, help="Frobenius power i for the witness")
    code.add_argument("--a", type=int, help="affine witness scale (default: generator of F_q^n)")
    code.add_argument("--b", type=int, help="affine witness shift (default: 1)")
    code.add_argument("--out", type=Path, help="output directory")

    scan = sub.add_parser("scan", parents=[common], help="integrality scan over many triples")
    scan.add_argument("--field-sizes", type=int, nargs="+", help="prime powers q")
    scan.add_argument("--limit", type=int, default=13, help="largest prime n, r")
    scan.add_argument("--csv", type=Path, help="write the scan table as CSV")

    return parser
