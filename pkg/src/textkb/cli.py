"""Command line: build a knowledge store from articles and query it.

    textkb ingest --corpus --kb animals.kb
    textkb ask "What do birds eat?" --kb animals.kb
    textkb repl --corpus
    textkb dump --corpus
    textkb check --kb animals.kb

A saved store is the text dump plus a `.lex` side file holding the words
learned while reading, so questions about them resolve after a reload.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .pipeline import ArticleStats, IntegrityError, Session, bundled_corpus


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textkb",
        description="Read encyclopedic articles into a concept network and query it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, kb_help: str) -> None:
        p.add_argument("--kb", metavar="FILE", help=kb_help)
        p.add_argument("--data", metavar="DIR", help="alternate data directory")
        p.add_argument("--topic", default="diet", help="topic vocabulary name")
        p.add_argument(
            "--corpus",
            action="store_true",
            help="read the bundled example articles",
        )
        p.add_argument(
            "--article",
            metavar="FILE",
            action="append",
            default=[],
            help="article file to read (repeatable)",
        )

    p = sub.add_parser("ingest", help="read articles and report statistics")
    common(p, "write the resulting store here")

    p = sub.add_parser("ask", help="answer one question")
    common(p, "load a previously saved store")
    p.add_argument("question")
    p.add_argument(
        "--no-explain", action="store_true", help="facts only, no because-chains"
    )

    p = sub.add_parser("repl", help="interactive question loop")
    common(p, "load a previously saved store")

    p = sub.add_parser("dump", help="print the store")
    common(p, "load a previously saved store")

    p = sub.add_parser("check", help="verify store invariants; exit 1 on problems")
    common(p, "load a previously saved store")
    return parser


def _session(args: argparse.Namespace, reading: bool) -> Session:
    session = Session(data_dir=args.data, topic=args.topic)
    if not reading and args.kb and Path(args.kb).exists():
        session.load_store(args.kb)
        return session
    articles = list(args.article)
    if args.corpus or (not articles and not args.kb):
        articles.extend(bundled_corpus())
    for path in articles:
        session.read_file(path)
    return session


def _print_stats(stats: list[ArticleStats]) -> None:
    print("article     sentences  selected  parsed  interpreted  added  derived")
    for st in stats:
        print(
            f"{st.title:<12}{st.sentences:>9}{st.selected:>10}{st.parsed:>8}"
            f"{st.interpreted:>13}{st.integrated:>7}{st.inferred:>9}"
        )
        for failure in st.failures:
            print(f"  skipped: {failure}")


def _repl(session: Session) -> None:
    explain = True
    print("one question per line; :explain on|off, :quit to leave")
    while True:
        try:
            line = input("kb> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line == ":quit":
            break
        if line.startswith(":explain"):
            word = line.removeprefix(":explain").strip()
            if word in ("on", "off"):
                explain = word == "on"
            else:
                print("usage: :explain on|off")
            continue
        print(session.answerer.ask(line, explain=explain))


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "ingest":
            session = Session(data_dir=args.data, topic=args.topic)
            articles = list(args.article)
            if args.corpus or not articles:
                articles.extend(bundled_corpus())
            _print_stats([session.read_file(p) for p in articles])
            if args.kb:
                session.save(args.kb)
                print(f"store written to {args.kb}")
            return 0
        session = _session(args, reading=False)
        if args.command == "ask":
            print(session.answerer.ask(args.question, explain=not args.no_explain))
        elif args.command == "repl":
            _repl(session)
        elif args.command == "dump":
            sys.stdout.write(session.dump())
        elif args.command == "check":
            problems = session.check()
            for problem in problems:
                print(problem, file=sys.stderr)
            return 1 if problems else 0
    except IntegrityError as exc:
        print(f"store verification failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
