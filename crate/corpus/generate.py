"""Regenerates the synthetic CSV files in this directory."""

import csv
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent


def write(name, header, rows):
    with open(HERE / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def d1():
    rows = [[a, "p"] for a in "yyyyn"] + [[a, "n"] for a in "ynnnn"]
    write("d1.csv", ["A", "class"], rows)


def rss():
    pos = {"A": ["y", "y", "y", ""], "B": ["", "", "y", "y"], "C": ["y", "y", "", ""]}
    neg = {"A": ["y", "y", "z", "z"], "B": ["z", "z", "y", "z"], "C": ["z", "z", "z", "z"]}
    rows = [[pos[k][i] for k in "ABC"] + ["p"] for i in range(4)]
    rows += [[neg[k][i] for k in "ABC"] + ["n"] for i in range(4)]
    write("rss.csv", ["A", "B", "C", "class"], rows)


def two_cluster():
    rng = random.Random(7)
    rows = []
    for i in range(24):
        cluster = i % 2
        rows.append([
            "yes" if cluster == 0 else "no",
            "yes" if cluster == 1 else "no",
            rng.choice(["red", "green", "blue"]),
            rng.randint(0, 9),
            "target",
        ])
    for _ in range(24):
        rows.append(["no", "no", rng.choice(["red", "green", "blue"]), rng.randint(0, 9), "other"])
    write("two-cluster.csv", ["north", "south", "colour", "level", "class"], rows)


def gspace():
    """100 positives, 100 negatives and twelve y-or-missing columns.

    g1 and g2 are general (40 TP, 45 FP each) with disjoint false positives;
    together they cover 30 positives and no negatives. n1..n5 are broad noise
    features that never touch those 30 positives, d1..d5 are narrow features
    without false positives.
    """
    pos, neg = 100, 100
    cover = {
        "g1": (set(range(0, 40)), set(range(0, 45))),
        "g2": (set(range(0, 30)) | set(range(40, 50)), set(range(45, 90))),
    }
    for i in range(5):
        tp = set(range(30, 100)) - set(range(30 + 10 * i, 40 + 10 * i))
        fp = set(range(100)) - set(range(15 * i, 15 * i + 15))
        cover[f"n{i + 1}"] = (tp, fp)
    for j in range(5):
        cover[f"d{j + 1}"] = (set(range(10 * j, 10 * j + 10)), set())
    names = list(cover)
    rows = []
    for e in range(pos):
        rows.append(["y" if e in cover[n][0] else "" for n in names] + ["pos"])
    for e in range(neg):
        rows.append(["y" if e in cover[n][1] else "" for n in names] + ["neg"])
    write("gspace.csv", names + ["class"], rows)


def demo():
    rng = random.Random(2024)
    rows = []
    for i in range(240):
        chd = i < 80
        age = rng.randint(38, 72) if chd else rng.randint(30, 68)
        sex = rng.choices(["male", "female"], [0.7, 0.3] if chd else [0.45, 0.55])[0]
        bmi = round(rng.gauss(28.5 if chd else 25.5, 3.2), 1)
        chol = round(rng.gauss(6.4 if chd else 5.5, 0.8), 1)
        tg = round(max(0.4, rng.gauss(2.3 if chd else 1.5, 0.6)), 1)
        smoking = rng.choices(["never", "former", "current"], [0.25, 0.3, 0.45] if chd else [0.5, 0.3, 0.2])[0]
        stress = rng.choices(["low", "medium", "high"], [0.2, 0.4, 0.4] if chd else [0.4, 0.4, 0.2])[0]
        if rng.random() < 0.03:
            bmi = ""
        if rng.random() < 0.03:
            tg = ""
        rows.append([age, sex, bmi, chol, tg, smoking, stress, "chd" if chd else "healthy"])
    write(
        "demo.csv",
        ["age", "sex", "bmi", "cholesterol", "triglycerides", "smoking", "stress", "diagnosis"],
        rows,
    )


if __name__ == "__main__":
    d1()
    rss()
    two_cluster()
    gspace()
    demo()
