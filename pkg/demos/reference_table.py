"""Recompute the published reference numbers and flag the ones that disagree."""

from gravlink import reference_table


def main():
    rows = reference_table()
    width = max(len(r["quantity"]) for r in rows)
    print(f"{'quantity':{width}s} {'reference':>12s} {'computed':>12s} "
          f"{'deviation':>10s} verdict")
    for r in rows:
        print(f"{r['quantity']:{width}s} {r['reference']:12.4e} {r['computed']:12.4e} "
              f"{r['deviation']:10.1e} {r['verdict']}")
    print()
    for r in rows:
        if r["verdict"] != "ok":
            print(f"{r['quantity']}: {r['note']}")


if __name__ == "__main__":
    main()
