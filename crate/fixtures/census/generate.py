"""Regenerates the census-mini fixture: two samples from one synthetic
population, described by ontologies whose names partly differ."""

import csv
import json
import math
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
ROWS = 2000

NOMINAL = {
    "workclass": ["Private", "Self-emp", "Gov", "Without-pay"],
    "education": ["HS-grad", "Some-college", "Bachelors", "Masters", "Doctorate"],
    "marital_status": ["Married", "Never-married", "Divorced"],
    "occupation": ["Tech", "Sales", "Exec", "Craft", "Service"],
    "relationship": ["Husband", "Wife", "Own-child", "Unmarried"],
    "sex": ["Male", "Female"],
    "income": ["<=50K", ">50K"],
}
NUMERIC = ["age", "education_num", "hours_per_week", "fnlwgt", "capital_gain"]

# Names used by the second ontology for the attributes it renames.
RENAMED = {
    "education": "attr_b7",
    "relationship": "attr_k2",
    "hours_per_week": "attr_q9",
    "income": "attr_z4",
}


def person(rng):
    age = rng.randint(17, 80)
    education = rng.choices(NOMINAL["education"], weights=[35, 25, 22, 12, 6])[0]
    education_num = {"HS-grad": 9, "Some-college": 10, "Bachelors": 13, "Masters": 14, "Doctorate": 16}[education]
    education_num += rng.random() * 0.9
    sex = rng.choice(NOMINAL["sex"])
    if age < 24:
        marital = "Never-married"
    else:
        marital = rng.choices(NOMINAL["marital_status"], weights=[55, 25, 20])[0]
    if marital == "Married":
        relationship = "Husband" if sex == "Male" else "Wife"
    elif age < 24:
        relationship = "Own-child"
    else:
        relationship = "Unmarried"
    workclass = rng.choices(NOMINAL["workclass"], weights=[60, 15, 20, 5])[0]
    if workclass == "Without-pay":
        hours = rng.uniform(1, 20)
    else:
        hours = rng.uniform(20, 70)
    if education in ("Masters", "Doctorate"):
        occupation = rng.choice(["Tech", "Exec"])
    else:
        occupation = rng.choice(NOMINAL["occupation"])
    score = (education_num - 9) / 7 + (hours - 20) / 50 + (0.3 if marital == "Married" else 0)
    if workclass == "Without-pay":
        income = "<=50K"
    else:
        income = ">50K" if score + rng.gauss(0, 0.25) > 0.9 else "<=50K"
    return {
        "age": age,
        "workclass": workclass,
        "fnlwgt": round(rng.lognormvariate(12, 0.5)),
        "education": education,
        "education_num": round(education_num, 2),
        "marital_status": marital,
        "occupation": occupation,
        "relationship": relationship,
        "sex": sex,
        "capital_gain": round(math.exp(rng.uniform(0, 9)), 1),
        "hours_per_week": round(hours, 1),
        "income": income,
    }


def ontology(tag, rename):
    name = lambda a: rename.get(a, a)
    props = [{"name": name(a)} for a in NUMERIC]
    props += [{"name": name(a), "nominal_values": v} for a, v in NOMINAL.items()]
    props.sort(key=lambda p: p["name"])
    return {"tag": tag, "classes": ["Adult"], "data_properties": props}


def write_csv(path, rows, rename):
    columns = list(rows[0])
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([rename.get(c, c) for c in columns])
        for r in rows:
            w.writerow([r[c] for c in columns])


def main():
    for side, seed, rename in ((1, 11, {}), (2, 22, RENAMED)):
        rng = random.Random(seed)
        rows = [person(rng) for _ in range(ROWS)]
        write_csv(HERE / f"census{side}.csv", rows, rename)
        with open(HERE / f"census{side}.json", "w") as f:
            json.dump(ontology(f"census{side}", rename), f, indent=2)
            f.write("\n")

    pairs = [{"e1": a, "e2": RENAMED.get(a, a)} for a in NUMERIC + list(NOMINAL)]
    for a, values in NOMINAL.items():
        pairs += [{"e1": f"{a}={v}", "e2": f"{RENAMED.get(a, a)}={v}"} for v in values]
    with open(HERE / "reference.json", "w") as f:
        json.dump({"onto1": "census1", "onto2": "census2", "correspondences": pairs}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
