"""Recount a db.jsonl without importing the package.

Prints API-once (distinct body hashes), API-multi (distinct gav/cve/method
triples), and the same two counts restricted to non-root entries.
"""

import argparse
import json
import sys


def recount(lines):
    once, multi, once_nr, multi_nr = set(), set(), set(), set()
    for line in lines:
        if not line.strip():
            continue
        row = json.loads(line)
        key = (row["gav"], row["cve"], row["class"], row["name"], tuple(row["desc"]))
        once.add(row["hash"])
        multi.add(key)
        if row["role"] == "reachable":
            once_nr.add(row["hash"])
            multi_nr.add(key)
    return {"once": len(once), "multi": len(multi), "excl_root_once": len(once_nr), "excl_root_multi": len(multi_nr)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("db")
    args = ap.parse_args()
    with open(args.db, encoding="utf-8") as fh:
        json.dump(recount(fh), sys.stdout)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
