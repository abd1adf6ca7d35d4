"""Regenerates the synthetic corpora under tests/data.

The files are committed; rerun only when changing the fixtures:
    python3 tests/data/make_fixtures.py
"""
import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

FUNCTION = [("the", "other"), ("a", "other"), ("of", "other"), ("and", "other"),
            ("to", "other"), ("in", "other"), ("was", "verb"), ("is", "verb")]
GENERAL = [("company", "noun"), ("year", "noun"), ("million", "noun"), ("said", "verb"),
           ("new", "adjective"), ("very", "adverb"), ("market", "noun"), ("he", "other")]

WORDS = {
    "plant": {
        "category": "noun",
        "senses": {
            "factory": [("steel", "noun"), ("workers", "noun"), ("production", "noun"),
                        ("built", "verb"), ("manufacturing", "adjective")],
            "flora": [("leaves", "noun"), ("garden", "noun"), ("grow", "verb"),
                      ("green", "adjective"), ("water", "noun")],
        },
        "forms": [("plant", "sg"), ("plants", "pl"), ("Plant", "sg")],
        "weights": [0.6, 0.4],
        "n": 60,
    },
    "run": {
        "category": "verb",
        "senses": {
            "operate": [("business", "noun"), ("manages", "verb"), ("firm", "noun"),
                        ("smoothly", "adverb"), ("board", "noun")],
            "sprint": [("fast", "adverb"), ("race", "noun"), ("legs", "noun"),
                       ("track", "noun"), ("quick", "adjective")],
        },
        "forms": [("run", "VB"), ("ran", "VBD"), ("running", "VBG"), ("runs", "VBZ"),
                  ("run", "VBN"), ("run", "VBP"), ("Run", "VB")],
        "weights": [0.5, 0.5],
        "n": 50,
    },
    "bright": {
        "category": "adjective",
        "senses": {
            "luminous": [("light", "noun"), ("sun", "noun"), ("shining", "verb"),
                         ("lamp", "noun"), ("glow", "noun")],
            "clever": [("student", "noun"), ("smart", "adjective"), ("idea", "noun"),
                       ("learns", "verb"), ("mind", "noun")],
            "cheerful": [("smile", "noun"), ("happy", "adjective"), ("mood", "noun"),
                         ("laughed", "verb"), ("warmly", "adverb")],
        },
        "forms": [("bright", ""), ("Bright", "")],
        "weights": [0.5, 0.3, 0.2],
        "n": 45,
    },
}


def sentence(rng, spec, sense):
    cue = spec["senses"][sense]
    length = rng.randint(5, 10)
    tokens = []
    for _ in range(length):
        r = rng.random()
        if r < 0.45:
            tokens.append(list(rng.choice(cue)))
        elif r < 0.75:
            tokens.append(list(rng.choice(FUNCTION)))
        else:
            tokens.append(list(rng.choice(GENERAL)))
    form, morph = rng.choice(spec["forms"])
    pos = {"noun": "noun", "verb": "verb", "adjective": "adjective"}[spec["category"]]
    target = rng.randint(0, length)
    tokens.insert(target, [form, pos])
    tokens.append([".", "other"])
    return tokens, target, morph


def dumps(obj):
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def write_word(name, spec, seed):
    rng = random.Random(seed)
    senses = list(spec["senses"])
    lines = [dumps({"word": name, "category": spec["category"], "senses": senses})]
    for _ in range(spec["n"]):
        sense = rng.choices(senses, weights=spec["weights"])[0]
        tokens, target, morph = sentence(rng, spec, sense)
        lines.append(dumps({"tokens": tokens, "target": target, "morph": morph, "sense": sense}))
    with open(os.path.join(HERE, f"synth_{name}.jsonl"), "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_mini8():
    lines = [dumps({"word": "drug", "category": "noun", "senses": ["medicine", "narcotic"]})]
    rows = [
        ([["The", "other"], ["drug", "noun"], ["works", "verb"], [".", "other"]], 1, "sg", "medicine"),
        ([["Illegal", "adjective"], ["drugs", "noun"], ["were", "verb"], ["seized", "verb"]], 1, "pl", "narcotic"),
        ([["FDA", "noun"], ["approved", "verb"], ["the", "other"], ["drug", "noun"]], 3, "sg", "medicine"),
        ([["drug", "noun"], ["dealers", "noun"]], 0, "sg", "narcotic"),
        ([["A", "other"], ["new", "adjective"], ["drug", "noun"], ["for", "other"], ["café", "noun"], ["owners", "noun"]], 2, "sg", None),
        ([["Generic", "adjective"], ["drugs", "noun"], ["cost", "verb"], ["less", "adverb"]], 1, "pl", "medicine"),
        ([["He", "other"], ["sold", "verb"], ["drugs", "noun"], ["quickly", "adverb"], ["!", "other"]], 2, "pl", "narcotic"),
        ([["drug", "noun"]], 0, "sg", "medicine"),
    ]
    for tokens, target, morph, sense in rows:
        rec = {"tokens": tokens, "target": target, "morph": morph}
        if sense is not None:
            rec["sense"] = sense
        lines.append(dumps(rec))
    with open(os.path.join(HERE, "mini8.jsonl"), "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    for i, (name, spec) in enumerate(WORDS.items()):
        write_word(name, spec, 1000 + i)
    write_mini8()
