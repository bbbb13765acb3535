#!/usr/bin/env python3
"""Write the grid-robot model documents used by the tests and the CLI.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from altersup.formats import dump_json, model_to_document
from altersup.gridworld import SCENARIOS, robot_model

OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    written = []
    for scenario in SCENARIOS:
        for nonblocking in (False, True):
            name = scenario + ("-goal" if nonblocking else "") + ".json"
            model = robot_model(scenario, nonblocking=nonblocking)
            (OUT / name).write_text(dump_json(model_to_document(model)), encoding="utf-8")
            written.append(name)
    model = robot_model(None)
    (OUT / "no-attack.json").write_text(dump_json(model_to_document(model)), encoding="utf-8")
    written.append("no-attack.json")
    for name in written:
        print(f"wrote tests/fixtures/{name}")


if __name__ == "__main__":
    main()
