#!/usr/bin/env python3
"""Regenerates data/synthetic_corpus.txt (about 10k tokens, fixed seed)."""
import random
import sys

TOPICS = [
    ["renal", "failure", "kidney", "dialysis", "creatinine", "nephrology"],
    ["heart", "myocardium", "cardiac", "muscle", "congestive", "failure"],
    ["stroke", "infarct", "brain", "ischemia", "vessel", "occlusion"],
    ["abortion", "miscarriage", "pregnancy", "fetal", "loss", "uterus"],
    ["delusion", "schizophrenia", "psychosis", "belief", "psychiatric", "episode"],
    ["pulmonary", "edema", "lung", "fluid", "congestive", "heart"],
    ["metastasis", "adenocarcinoma", "tumor", "spread", "malignant", "lymph"],
    ["calcification", "stenosis", "valve", "narrowing", "mitral", "aortic"],
    ["diarrhea", "stomach", "cramps", "bowel", "infection", "abdominal"],
    ["mitral", "stenosis", "atrial", "fibrillation", "rhythm", "valve"],
    ["a", "a1", "a2", "r", "b", "x"],
]
FILLER = ["the", "patient", "with", "and", "of", "was", "noted", "history", "showed",
          "in", "a", "no", "evidence", "for", "treated", "after", "signs"]


def main(out_path, target=10000, seed=20200405):
    rng = random.Random(seed)
    lines, total = [], 0
    while total < target:
        topic = rng.choice(TOPICS)
        n = rng.randint(8, 18)
        words = [rng.choice(topic) if rng.random() < 0.6 else rng.choice(FILLER) for _ in range(n)]
        lines.append(" ".join(words))
        total += n
    with open(out_path, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_corpus.txt")
