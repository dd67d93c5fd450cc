"""Command-line interface.

Every subcommand computes a JSON-ready report; text output is rendered
from that report, so ``--json`` and the default text view never drift.
Exit codes: 0 success, 1 mathematical failure (e.g. a link violation),
2 resource exhaustion (the coset cap; an "unknown", not an "infinite"),
64 usage error.  Runs are deterministic: identical arguments on
identical input files produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from vhcert.certificates import (
    FAIL,
    PASS,
    UNKNOWN,
    amalgam_ranks,
    irreducibility_check,
    nst_check,
    simplicity_certificate,
)
from vhcert.complexes import (
    ComplexError,
    Letter,
    check_link,
    euler_characteristic,
    parse_complex,
)
from vhcert.fpgroups import (
    WordError,
    abelianization,
    presentation_from_complex,
)
from vhcert.local_actions import local_group, sphere_action
from vhcert.permgroups import recognize
from vhcert.reidemeister_schreier import (
    is_perfect,
    subgroup_presentation,
    tietze_simplify,
)
from vhcert.todd_coxeter import (
    EnumerationExhausted,
    normal_closure_table,
    parity_kernel_table,
    quotient_structure,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Resolved options for one invocation (one run per process)."""

    command: str
    path: str | None = None
    word: str | None = None
    depth: int = 1
    side: str | None = None
    cap: int = 10**6
    strategy: str = "hlt"
    simplicity_bound: int = 100_000
    budget: int = 10_000
    as_json: bool = False
    assume_nrf: bool = False
    m: int = 0
    n: int = 0
    seed: int = 0  # placeholder; nothing in the pipeline is randomized


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_complex(handle.read())


def _emit(report: dict, as_json: bool, text_lines) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        for line in text_lines:
            print(line)


def _require_word(p, text: str):
    if text is None:
        raise WordError("this subcommand requires --word")
    return p.parse_word(text)


def cmd_check_link(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    report_obj = check_link(c)
    report = {
        "complex": c.name,
        "m": c.m,
        "n": c.n,
        "squares": len(c.squares),
        "ok": report_obj.ok,
        "corners_covered": report_obj.corners_covered,
        "corners_expected": report_obj.total_corners,
        "missing_corners": [
            [c.letter_name(a), c.letter_name(b)] for a, b in report_obj.missing_corners
        ],
        "duplicate_corners": [
            [c.letter_name(a), c.letter_name(b)]
            for (a, b), _ in report_obj.duplicate_corners
        ],
    }
    lines = [
        f"{report['corners_covered']}/{report['corners_expected']} corners",
        "link condition holds" if report_obj.ok else "link condition FAILS",
    ]
    for a, b in report["missing_corners"]:
        lines.append(f"missing corner ({a}, {b})")
    for a, b in report["duplicate_corners"]:
        lines.append(f"duplicated corner ({a}, {b})")
    _emit(report, cfg.as_json, lines)
    return EXIT_OK if report_obj.ok else EXIT_FAIL


def cmd_euler(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    if not check_link(c).ok:
        _emit({"complex": c.name, "error": "link condition fails"},
              cfg.as_json, ["link condition fails"])
        return EXIT_FAIL
    chi = euler_characteristic(c)
    _emit({"complex": c.name, "euler_characteristic": chi}, cfg.as_json,
          [f"euler characteristic: {chi}"])
    return EXIT_OK


def cmd_local(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    if not check_link(c).ok:
        _emit({"complex": c.name, "error": "link condition fails"},
              cfg.as_json, ["link condition fails"])
        return EXIT_FAIL
    sides = [cfg.side] if cfg.side else ["h", "v"]
    report = {"complex": c.name, "depth": cfg.depth, "groups": []}
    lines = []
    for side in sides:
        group = local_group(c, side, cfg.depth)
        actor_side = "v" if side == "h" else "h"
        count = c.n if side == "h" else c.m
        gens = []
        for i in range(count):
            actor = Letter(actor_side, i + 1)
            perm = sphere_action(c, actor, cfg.depth)
            gens.append({"actor": c.letter_name(actor), "cycles": perm.cycle_string()})
        entry = {
            "side": side,
            "degree": group.degree,
            "order": group.order,
            "recognition": recognize(group),
            "generators": gens,
        }
        report["groups"].append(entry)
        lines.append(
            f"P_{side}^({cfg.depth}): degree {group.degree}, order {group.order}, "
            f"{entry['recognition']}"
        )
        lines += [f"  {g['actor']}: {g['cycles']}" for g in gens]
    _emit(report, cfg.as_json, lines)
    return EXIT_OK


def cmd_irreducible(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    step = irreducibility_check(c)
    report = {"complex": c.name, **step.as_dict()}
    _emit(report, cfg.as_json, [f"irreducibility: {step.verdict}"] + [
        f"  {k}: {v}" for k, v in step.values.items()
    ])
    return EXIT_OK if step.verdict == PASS else EXIT_FAIL


def cmd_nst(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    step = nst_check(c)
    report = {"complex": c.name, **step.as_dict()}
    _emit(report, cfg.as_json, [f"normal subgroup theorem hypotheses: {step.verdict}"] + [
        f"  {k}: {v}" for k, v in step.values.items()
    ])
    return EXIT_OK if step.verdict == PASS else EXIT_FAIL


def cmd_closure_index(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    p = presentation_from_complex(c)
    word = _require_word(p, cfg.word)
    try:
        table = normal_closure_table(p, word, cap=cfg.cap, strategy=cfg.strategy)
    except EnumerationExhausted:
        _emit({"complex": c.name, "word": cfg.word, "verdict": UNKNOWN,
               "coset_cap": cfg.cap},
              cfg.as_json,
              [f"exhausted: no closure within {cfg.cap} cosets (index unknown)"])
        return EXIT_EXHAUSTED
    report = {"complex": c.name, "word": p.word_to_string(word),
              "index": table.index, **table.summary()}
    _emit(report, cfg.as_json,
          [f"normal closure index: {table.index}",
           f"strategy {table.strategy}: max live {table.max_live}, "
           f"defined {table.total_defined}"])
    return EXIT_OK


def cmd_quotient(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    p = presentation_from_complex(c)
    word = _require_word(p, cfg.word)
    try:
        table = normal_closure_table(p, word, cap=cfg.cap, strategy=cfg.strategy)
    except EnumerationExhausted:
        _emit({"complex": c.name, "word": cfg.word, "verdict": UNKNOWN,
               "coset_cap": cfg.cap},
              cfg.as_json, [f"exhausted at cap {cfg.cap} (order unknown)"])
        return EXIT_EXHAUSTED
    q = quotient_structure(table)
    report = {
        "complex": c.name,
        "word": p.word_to_string(word),
        "order": q.order,
        "abelian": q.abelian,
        "invariants": list(q.invariants.torsion) if q.abelian else None,
    }
    lines = [f"quotient order: {q.order}",
             f"abelian: {q.abelian}"
             + (f", invariants {report['invariants']}" if q.abelian else "")]
    _emit(report, cfg.as_json, lines)
    return EXIT_OK


def cmd_abelianize(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    inv = abelianization(presentation_from_complex(c))
    report = {"complex": c.name, "free_rank": inv.free_rank,
              "torsion": list(inv.torsion)}
    _emit(report, cfg.as_json,
          [f"abelianization: {inv} (free rank {inv.free_rank}, "
           f"torsion {list(inv.torsion)})"])
    return EXIT_OK


def _subgroup_table(cfg: RunConfig, p):
    """Coset table for rs/simplify: the parity kernel by default, or the
    normal closure of --word when given."""
    if cfg.word is None:
        return parity_kernel_table(p), "parity kernel"
    word = p.parse_word(cfg.word)
    table = normal_closure_table(p, word, cap=cfg.cap, strategy=cfg.strategy)
    return table, f"normal closure of {p.word_to_string(word)}"


def cmd_rs(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    p = presentation_from_complex(c)
    try:
        table, label = _subgroup_table(cfg, p)
    except EnumerationExhausted:
        _emit({"complex": c.name, "verdict": UNKNOWN, "coset_cap": cfg.cap},
              cfg.as_json, [f"exhausted at cap {cfg.cap}"])
        return EXIT_EXHAUSTED
    sub = subgroup_presentation(p, table)
    report = {
        "complex": c.name,
        "subgroup": label,
        "index": table.index,
        "generators": len(sub.generators),
        "relators": len(sub.relators),
        "total_length": sub.total_length(),
        "perfect": is_perfect(sub),
        "presentation": str(sub),
    }
    _emit(report, cfg.as_json, [
        f"subgroup: {label} (index {table.index})",
        f"presentation: {report['generators']} generators, "
        f"{report['relators']} relators, total length {report['total_length']}",
        f"perfect: {report['perfect']}",
    ])
    return EXIT_OK


def cmd_simplify(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    p = presentation_from_complex(c)
    try:
        table, label = _subgroup_table(cfg, p)
    except EnumerationExhausted:
        _emit({"complex": c.name, "verdict": UNKNOWN, "coset_cap": cfg.cap},
              cfg.as_json, [f"exhausted at cap {cfg.cap}"])
        return EXIT_EXHAUSTED
    sub = subgroup_presentation(p, table)
    simplified = tietze_simplify(sub, total_length_budget=cfg.budget)
    report = {
        "complex": c.name,
        "subgroup": label,
        "raw": {"generators": len(sub.generators), "relators": len(sub.relators),
                "total_length": sub.total_length()},
        "simplified": {"generators": len(simplified.generators),
                       "relators": len(simplified.relators),
                       "total_length": simplified.total_length()},
        "relator_generator_difference": len(simplified.relators) - len(simplified.generators),
        "perfect": is_perfect(simplified),
        "presentation": str(simplified),
    }
    _emit(report, cfg.as_json, [
        f"subgroup: {label} (index {table.index})",
        f"raw: {report['raw']['generators']} generators, "
        f"{report['raw']['relators']} relators",
        f"simplified: {report['simplified']['generators']} generators, "
        f"{report['simplified']['relators']} relators, "
        f"total length {report['simplified']['total_length']}",
        f"r - g = {report['relator_generator_difference']}, perfect: {report['perfect']}",
    ])
    return EXIT_OK


def cmd_amalgam(cfg: RunConfig) -> int:
    s1, s2 = amalgam_ranks(cfg.m, cfg.n)
    report = {
        "m": cfg.m,
        "n": cfg.n,
        "splittings": [
            {"vertex_rank": s.vertex_rank, "edge_rank": s.edge_rank,
             "edge_index": s.edge_index}
            for s in (s1, s2)
        ],
    }
    lines = [
        f"F_{s.vertex_rank} *_(F_{s.edge_rank}) F_{s.vertex_rank}"
        f"  (edge group of index {s.edge_index})"
        for s in (s1, s2)
    ]
    _emit(report, cfg.as_json, lines)
    return EXIT_OK


def cmd_simple_cert(cfg: RunConfig) -> int:
    c = _load(cfg.path)
    p = presentation_from_complex(c)
    word = _require_word(p, cfg.word)
    cert = simplicity_certificate(
        c, word, assume_nrf=cfg.assume_nrf, cap=cfg.cap, strategy=cfg.strategy
    )
    report = cert.as_dict()
    lines = [f"certificate for {cert.complex_name}, word {cert.word}"]
    for step in cert.steps:
        lines.append(f"  {step.name}: {step.verdict}")
    lines.append(f"assumption acknowledged: {cert.assumptions[0]['acknowledged']}")
    lines.append(f"conclusion: {cert.conclusion}")
    _emit(report, cfg.as_json, lines)
    verdicts = [s.verdict for s in cert.steps]
    if FAIL in verdicts:
        return EXIT_FAIL
    if UNKNOWN in verdicts:
        return EXIT_EXHAUSTED
    return EXIT_OK


_COMMANDS = {
    "check-link": cmd_check_link,
    "euler": cmd_euler,
    "local": cmd_local,
    "irreducible": cmd_irreducible,
    "nst": cmd_nst,
    "closure-index": cmd_closure_index,
    "quotient": cmd_quotient,
    "abelianize": cmd_abelianize,
    "rs": cmd_rs,
    "simplify": cmd_simplify,
    "amalgam": cmd_amalgam,
    "simple-cert": cmd_simple_cert,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="vhcert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_path=True, word=False, cap=False):
        p = sub.add_parser(name, help=help_text)
        if needs_path:
            p.add_argument("path", help="complex file (.vh)")
        if word:
            p.add_argument("--word", help="word over the complex generators, "
                                          "e.g. a2*a1^-1*a3*a4^-1")
        if cap:
            p.add_argument("--cap", type=int, default=10**6,
                           help="coset cap (default 1000000)")
            p.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")
        p.add_argument("--json", action="store_true", dest="as_json",
                       help="emit the JSON report instead of text")
        return p

    add("check-link", "verify the link condition")
    add("euler", "Euler characteristic of a link-valid complex")
    p = add("local", "local groups on tree spheres")
    p.add_argument("--side", choices=("h", "v"))
    p.add_argument("--depth", type=int, default=1)
    add("irreducible", "irreducibility via the depth-2 order criterion")
    add("nst", "normal subgroup theorem hypotheses")
    add("closure-index", "index of the normal closure of a word",
        word=True, cap=True)
    add("quotient", "structure of the quotient by a normal closure",
        word=True, cap=True)
    add("abelianize", "abelian invariants of the complex's group")
    p = add("rs", "subgroup presentation (parity kernel, or --word closure)",
            word=True, cap=True)
    p = add("simplify", "rs followed by Tietze simplification",
            word=True, cap=True)
    p.add_argument("--budget", type=int, default=10_000,
                   help="total relator length budget (default 10000)")
    p = add("amalgam", "free-amalgam splitting ranks for given m, n",
            needs_path=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("simple-cert", "full simplicity certificate", word=True, cap=True)
    p.add_argument("--assume-nrf", action="store_true", dest="assume_nrf",
                   help="acknowledge the external non-residual-finiteness "
                        "theorem for the embedded subcomplex")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(command=args.command)
    for name in ("path", "word", "depth", "side", "cap", "strategy", "budget",
                 "as_json", "assume_nrf", "m", "n"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if cfg.cap < 1 or cfg.budget < 1:
        parser.error("caps and budgets must be positive")
    try:
        return _COMMANDS[cfg.command](cfg)
    except (ComplexError, WordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
