#!/usr/bin/env python3
"""Generate the bundled synthetic grocery store and its transactions.

Racetrack walkways around a grid of four aisles. Twenty locations hold 48
sublocations: four peripheral walls of four, eight endcaps of one, and
eight aisle shelves of three (the two shelves of an aisle face the same
aisle nodes). Categories follow the classic grocery table, and the current
layout places category i on location i. Baskets follow shopping missions,
so categories of a mission tend to be bought together.

    python3 tools/make_synthetic_store.py data/
"""

import csv
import json
import random
import sys
from pathlib import Path

SEED = 20240501
TRANSACTIONS = 5000

CATEGORIES = [
    ("Fruits", "peripheral", ["Bananas", "Citrus", "Hard Fruit", "Soft Fruit"]),
    ("Produce", "peripheral", ["Root Vegetables", "Leafy Green Vegetables", "Ready Cut Vegetables", "Fresh Juice"]),
    ("Frozen Food", "peripheral", ["Frozen Vegetables", "Frozen Snacks", "Frozen Pizzas", "Frozen Potatoes"]),
    ("Bakery", "peripheral", ["Bread Substitutes & Spreads", "Fresh Bread", "Prepackaged Bread", "Special Breads"]),
    ("Fresh Dairy Food", "endcap", ["Fresh Dairy Food"]),
    ("Seasonal Deli", "endcap", ["Seasonal Deli"]),
    ("Seasonal Non-food", "endcap", ["Seasonal Non-food"]),
    ("Seasonal Candy", "endcap", ["Seasonal Candy"]),
    ("Fresh Dairy Drink", "endcap", ["Fresh Dairy Drink"]),
    ("Fresh Nuts", "endcap", ["Fresh Nuts"]),
    ("Household Assortment", "endcap", ["Household Assortment"]),
    ("Seasonal Confectionery", "endcap", ["Seasonal Confectionery"]),
    ("Appetizers", "aisle", ["Mediterranean Food", "International", "Seafood Appetizers"]),
    ("Condiments", "aisle", ["Salad Essentials", "Sauces", "Pickled Food"]),
    ("Preserved Food", "aisle", ["Preserved Vegetables", "Preserved Meats", "Sausages"]),
    ("Chips", "aisle", ["Regular Chips", "Premium Chips", "Pop Corn"]),
    ("Beer", "aisle", ["Bulk Beer", "Bottle & Can Beer", "Special Beer"]),
    ("Water & Energy Drinks", "aisle", ["Energy Drinks", "Flavored Water", "Water"]),
    ("Soda & Soft Drinks", "aisle", ["Coke", "Soda", "Ice Tea"]),
    ("Soups & Eggs and Non-perishable Food", "aisle", ["Cookies", "Soups", "Eggs & Non-perishable Dairy"]),
]

# relative purchase frequency per category, then per subcategory
CATEGORY_WEIGHT = [9, 8, 4, 9, 7, 2, 1.5, 2, 5, 1.5, 2.5, 1.5, 2, 3.5, 3, 4, 3, 4, 5, 4]
SUB_WEIGHT_DECAY = 0.6

# shopping missions: categories (0-based) bought together, with mission weight
MISSIONS = [
    ([0, 1, 3, 4, 8], 4),          # fresh food
    ([15, 16, 17, 18, 9], 3),      # party and drinks
    ([12, 13, 14, 19, 2], 3),      # pantry stock-up
    ([5, 6, 7, 11, 10], 1),        # seasonal and household
]
IN_MISSION = 0.8  # chance that each extra category comes from the mission

AISLES = [12, 17, 22, 27]
BACK_X = [4, 6.5, 9, 12, 14.5, 17, 19.5, 22, 24.5, 27, 29.5, 32, 36]
FRONT_X = [4, 12, 17, 22, 27, 32, 36]
SIDE_Y = [6, 10, 14, 18, 22, 26]
AISLE_Y = [6, 10, 15, 20, 26]


def node_id(x, y):
    fx = f"{x:g}".replace(".", "p")
    fy = f"{y:g}".replace(".", "p")
    return f"n{fx}_{fy}"


def build_store():
    nodes = {}

    def node(x, y):
        nid = node_id(x, y)
        nodes.setdefault(nid, {"id": nid, "x": x, "y": y})
        return nid

    edges = []

    def chain(points):
        ids = [node(x, y) for x, y in points]
        edges.extend({"a": a, "b": b} for a, b in zip(ids, ids[1:]))

    entrance = node(4, 0)
    exit_ = node(32, 0)
    chain([(x, 6) for x in FRONT_X])
    chain([(x, 26) for x in BACK_X])
    chain([(4, y) for y in SIDE_Y])
    chain([(36, y) for y in SIDE_Y])
    for x in AISLES:
        chain([(x, y) for y in AISLE_Y])
    edges.append({"a": entrance, "b": node(4, 6)})
    edges.append({"a": exit_, "b": node(32, 6)})

    facings = {
        0: [(4, 10), (4, 14), (4, 18), (4, 22)],           # left wall
        1: [(6.5, 26), (9, 26), (12, 26), (14.5, 26)],     # back wall, left half
        2: [(24.5, 26), (27, 26), (29.5, 26), (32, 26)],   # back wall, right half
        3: [(36, 22), (36, 18), (36, 14), (36, 10)],       # right wall
    }
    endcaps = [(x, 6) for x in AISLES] + [(x, 26) for x in AISLES]
    for i, p in enumerate(endcaps):
        facings[4 + i] = [p]
    for a, x in enumerate(AISLES):
        for side in range(2):
            facings[12 + 2 * a + side] = [(x, 10), (x, 15), (x, 20)]

    locations = []
    sub_no = 0
    for loc in range(20):
        fixture = CATEGORIES[loc][1]
        subs = []
        for p in facings[loc]:
            sub_no += 1
            subs.append({"id": f"S{sub_no:02d}", "center": node(*p), "facing": [node(*p)]})
        center = subs[len(subs) // 2]["center"] if len(subs) > 1 else subs[0]["center"]
        locations.append({"id": f"L{loc + 1:02d}", "fixture": fixture, "center": center, "sublocations": subs})
    assert sub_no == 48

    categories = []
    sub_no = 0
    current_cat, current_sub = {}, {}
    for c, (name, fixture, subnames) in enumerate(CATEGORIES):
        cid = f"C{c + 1:02d}"
        subs = []
        for sname in subnames:
            sub_no += 1
            sid = f"SC{sub_no:02d}"
            subs.append({"id": sid, "name": sname})
            current_sub[sid] = f"S{sub_no:02d}"
        categories.append({"id": cid, "name": name, "eligible_fixtures": [fixture], "subcategories": subs})
        current_cat[cid] = f"L{c + 1:02d}"

    return {
        "name": "synthetic grocery store (20 locations, 48 sublocations)",
        "synthetic": True,
        "nodes": sorted(nodes.values(), key=lambda n: (n["y"], n["x"])),
        "edges": edges,
        "entrance": entrance,
        "exit": exit_,
        "locations": locations,
        "categories": categories,
        "current_layout": {"categories": current_cat, "subcategories": current_sub},
    }


def build_transactions(store, rng):
    cats = store["categories"]
    rows = []
    for t in range(1, TRANSACTIONS + 1):
        m = min(len(cats), 1 + int(rng.expovariate(1 / 2.6)))
        mission = rng.choices(MISSIONS, weights=[w for _, w in MISSIONS])[0][0]
        chosen = set()
        while len(chosen) < m:
            if len(chosen) < len(mission) and rng.random() < IN_MISSION:
                pool = mission
            else:
                pool = range(len(cats))
            chosen.add(rng.choices(pool, weights=[CATEGORY_WEIGHT[c] for c in pool])[0])
        for c in sorted(chosen):
            subs = cats[c]["subcategories"]
            weights = [SUB_WEIGHT_DECAY ** i for i in range(len(subs))]
            g = 1 + (rng.random() < 0.35) + (rng.random() < 0.12)
            picked = set()
            while len(picked) < min(g, len(subs)):
                picked.add(rng.choices(range(len(subs)), weights=weights)[0])
            for s in sorted(picked):
                rows.append((f"T{t:05d}", subs[s]["id"]))
    return rows


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    store = build_store()
    with open(out / "synthetic_store.json", "w", newline="\n") as f:
        json.dump(store, f, indent=1)
        f.write("\n")
    with open(out / "synthetic_transactions.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["transaction_id", "subcategory_id"])
        w.writerows(build_transactions(store, rng))


if __name__ == "__main__":
    main()
