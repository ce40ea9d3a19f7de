#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Runs an SMT-LIB script through the cvc5 Python bindings, for hosts that
# have the bindings but no cvc5 binary.
#
#   cvc5_smt.py FILE [--opt | --no-opt | --opt=value ...]
#   cvc5_smt.py --version

import sys

import cvc5
from cvc5 import InputLanguage, InputParser, SymbolManager


def main(argv):
    if len(argv) > 1 and argv[1] == "--version":
        print("cvc5 " + cvc5.__version__ if hasattr(cvc5, "__version__") else "cvc5 (python)")
        return 0
    if len(argv) < 2:
        print("usage: cvc5_smt.py FILE [options]", file=sys.stderr)
        return 2
    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    for o in argv[2:]:
        key, _, val = o.lstrip("-").partition("=")
        if not val and key.startswith("no-"):
            key, val = key[3:], "false"
        solver.setOption(key, val or "true")
    sm = SymbolManager(tm)
    parser = InputParser(solver, sm)
    parser.setFileInput(InputLanguage.SMT_LIB_2_6, argv[1])
    while True:
        cmd = parser.nextCommand()
        if cmd.isNull():
            break
        out = cmd.invoke(solver, sm)
        if out:
            sys.stdout.write(out if out.endswith("\n") else out + "\n")
            sys.stdout.flush()
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main(sys.argv))
    except Exception as e:  # parser and option errors
        print("error: %s" % e, file=sys.stderr)
        sys.exit(1)
