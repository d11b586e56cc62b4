#!/usr/bin/env python3
"""Regenerates the fixture trees under fixtures/.

Everything is deterministic (fixed seed). The synthetic dataset's expected
evaluation counts are computed here, from the generator's own record of
what each study contains, and written to synthetic/oracle.json. The C++
acceptance test carries a frozen copy of those counts.

Usage: python3 fixtures/generate.py
"""

import json
import os
import random
import shutil

HERE = os.path.dirname(os.path.abspath(__file__))

EVAL_LABELS = [
    "Atelectasis", "Cardiomegaly", "Consolidation", "Edema",
    "Enlarged Cardiomediastinum", "Fracture", "Lung Lesion", "Lung Opacity",
    "No Finding", "Pleural Effusion", "Pleural Other", "Pneumonia",
    "Pneumothorax", "Support Devices",
]

# Agent coverage, transcribed by hand from the reference coverage matrix. Kept
# separate from the C++ registry on purpose: `fixtures validate` fails if
# the two disagree.
_ROWS = {
    "Atelectasis": [1, 2, 4, 5, 6, 7],
    "Cardiomegaly": [1, 2, 4, 5, 6, 7],
    "Consolidation": [1, 2, 4, 5, 6, 7],
    "Edema": [1, 2, 4, 5, 6, 7],
    "Pleural Effusion": [1, 2, 5, 6, 7],
    "Emphysema": [1, 4, 5],
    "Enlarged Cardiomediastinum": [1, 2],
    "Fracture": [1, 2, 5],
    "Fibrosis": [1, 4, 5],
    "Hernia": [1, 4, 5],
    "Infiltration": [1, 5],
    "Lung Lesion": [1, 2],
    "Lung Opacity": [1, 2, 3],
    "Mass": [1, 4, 5],
    "Nodule": [1, 4, 5],
    "Pleural Thickening": [1, 4, 5],
    "Pneumonia": [1, 2, 3, 4, 5],
    "Pneumothorax": [1, 2, 4, 5],
}
COVERAGE = {k: sorted(p for p, ids in _ROWS.items() if k in ids) for k in range(1, 8)}

# Mask codes.
BACKGROUND, LEFT_LUNG, RIGHT_LUNG, DIAPHRAGM = 0, 2, 3, 4


def canonical(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(text)


def finding_set(agent_id, study_id, scores, heatmaps=None):
    return canonical({
        "agent_id": agent_id,
        "study_id": study_id,
        "scores": scores,
        "heatmaps": heatmaps or {},
    })


def grid_text(rows):
    h, w = len(rows), len(rows[0])
    return f"{w} {h}\n" + "".join(" ".join(str(v) for v in r) + "\n" for r in rows)


def chest_mask(w=8, h=9):
    """Right lung on image left, left lung on image right, diaphragm row."""
    rows = []
    for y in range(h):
        if y == h - 1:
            rows.append([DIAPHRAGM] * w)
            continue
        row = []
        for x in range(w):
            if x == 0 or x == w - 1:
                row.append(BACKGROUND)
            elif x < w // 2:
                row.append(RIGHT_LUNG)
            else:
                row.append(LEFT_LUNG)
        rows.append(row)
    return rows


# ---------------------------------------------------------------- case studies

def case_studies():
    root = os.path.join(HERE, "case_studies")
    shutil.rmtree(root, ignore_errors=True)
    scores = {
        "case_opacity": {3: {"Lung Opacity": 0.7804, "Pneumonia": 0.8529}},
        "case_pneumonia": {2: {"Lung Opacity": 0.861},
                 3: {"Lung Opacity": 0.7746, "Pneumonia": 0.6436},
                 7: {"Pneumonia": 0.9656}},
        "case_atelectasis": {1: {"Atelectasis": 0.8503}},
    }
    reports = {
        "case_opacity": {
            "cammal": "Low lung volumes. Hazy bibasilar densities, likely overlying soft tissue. "
                      "No pneumothorax.\n",
            "chexagent": "The lungs are clear. No pleural effusion or pneumothorax.\n",
        },
        "case_pneumonia": {
            "cammal": "Patchy right basilar opacity concerning for pneumonia. Mild pulmonary edema.\n",
            "chexagent": "Mild pulmonary edema. No pneumothorax.\n",
        },
        "case_atelectasis": {
            "cammal": "Linear atelectasis at the left base. No pleural effusion.\n",
            "chexagent": "Bibasilar atelectasis. Heart size is normal.\n",
        },
    }
    for study, by_agent in scores.items():
        d = os.path.join(root, study)
        for k in range(1, 8):
            heatmaps = {}
            if study == "case_atelectasis" and k == 1:
                heatmaps = {"Atelectasis": "atelectasis_agent1.grid"}
            write(os.path.join(d, f"agent{k}.json"),
                  finding_set(k, study, by_agent.get(k, {}), heatmaps))
        for name, text in reports[study].items():
            write(os.path.join(d, f"report_{name}.txt"), text)
    # The atelectasis case gets a mask and a left-lower heatmap so the anatomy stage runs.
    mask = chest_mask()
    heat = [[0] * 8 for _ in range(9)]
    for y in (6, 7):
        for x in (4, 5, 6):
            heat[y][x] = 1 if (x, y) == (5, 7) else 0.75
    write(os.path.join(root, "case_atelectasis", "mask.grid"), grid_text(mask))
    write(os.path.join(root, "case_atelectasis", "atelectasis_agent1.grid"), grid_text(heat))

    config = {
        "fixtures": ".",
        "out_dir": "out",
        "disable_agents": [102],
        "agents": [
            {"id": 7, "extra_coverage": ["Pneumonia"]},
            {"id": 103, "name": "cammal", "dataset": "MIMIC-CXR reports", "kind": "report"},
        ],
    }
    write(os.path.join(root, "config.json"), json.dumps(config, indent=2) + "\n")
    write(os.path.join(root, "manifest.json"), json.dumps({"studies": [
        {"study_id": "case_opacity"}, {"study_id": "case_pneumonia"},
        {"study_id": "case_atelectasis", "mask": "case_atelectasis/mask.grid"},
    ]}, indent=2) + "\n")


# ---------------------------------------------------------------- anatomy

def anatomy():
    d = os.path.join(HERE, "anatomy", "effusion_left_lower")
    shutil.rmtree(os.path.dirname(d), ignore_errors=True)
    mask = chest_mask()
    heat = [[0] * 8 for _ in range(9)]
    # The lungs span rows 0..7, so the lower band (3/3/2 split) is rows 6..7.
    for y in (6, 7):
        for x in (4, 5, 6):
            heat[y][x] = 0.5 if x == 4 else 0.9
    heat[7][6] = 1
    write(os.path.join(d, "mask.grid"), grid_text(mask))
    write(os.path.join(d, "heatmap.grid"), grid_text(heat))


# ---------------------------------------------------------------- synthetic

REPORT_PHRASES = {
    "Atelectasis": "atelectasis",
    "Cardiomegaly": "cardiomegaly",
    "Consolidation": "consolidation",
    "Edema": "edema",
    "Pleural Effusion": "pleural effusion",
    "Fracture": "fracture",
    "Pneumonia": "pneumonia",
    "Pneumothorax": "pneumothorax",
    "Lung Opacity": "lung opacity",
    "Support Devices": "support devices",
}
SENTENCES = {"positive": "There is {}.", "negative": "No {}.", "uncertain": "Possible {}."}


def fallback_vector(scores_by_agent, mentions):
    """The fallback fusion rule, restated: mean of covering agents (agent id
    order), +/-0.1 on net report polarity, clamp, No Finding complement."""
    probs = {}
    for label in EVAL_LABELS:
        if label == "No Finding":
            continue
        vals = [scores_by_agent[k][label] for k in sorted(scores_by_agent) if label in scores_by_agent[k]]
        p = 0.0
        if vals:
            s = 0.0
            for v in vals:
                s += v
            p = s / len(vals)
        pos = sum(1 for (l, pol) in mentions if l == label and pol == "positive")
        neg = sum(1 for (l, pol) in mentions if l == label and pol == "negative")
        if pos > neg:
            p += 0.1
        elif neg > pos:
            p -= 0.1
        probs[label] = min(1.0, max(0.0, p))
    probs["No Finding"] = 1.0 - max(probs.values())
    return probs


def synthetic():
    root = os.path.join(HERE, "synthetic")
    shutil.rmtree(root, ignore_errors=True)
    rng = random.Random(20241017)
    studies = [f"syn{i:02d}" for i in range(1, 11)]
    no_mask = "syn07"
    manifest = []
    truth_rows = []
    oracle = {label: [0, 0] for label in EVAL_LABELS}

    for sid in studies:
        d = os.path.join(root, sid)
        while True:
            scores = {k: {p: round(rng.random(), 4) for p in COVERAGE[k]} for k in range(1, 8)}
            mentions = []
            texts = {}
            for name in ("chexagent", "qwen2vl"):
                picks = rng.sample(sorted(REPORT_PHRASES), rng.randint(1, 3))
                sentences = []
                for label in picks:
                    pol = rng.choice(["positive", "negative", "uncertain"])
                    mentions.append((label, pol))
                    sentences.append(SENTENCES[pol].format(REPORT_PHRASES[label]))
                texts[name] = " ".join(sentences) + "\n"
            probs = fallback_vector(scores, mentions)
            if all(abs(v - 0.5) > 1e-6 for v in probs.values()):
                break

        heat_refs = {}
        if sid != no_mask:
            heat = [[round(rng.random() * 0.6, 3) for _ in range(8)] for _ in range(9)]
            hx, hy = rng.randrange(1, 7), rng.randrange(0, 8)
            heat[hy][hx] = 1
            write(os.path.join(d, "atelectasis_agent1.grid"), grid_text(heat))
            write(os.path.join(d, "mask.grid"), grid_text(chest_mask()))
            heat_refs = {"Atelectasis": "atelectasis_agent1.grid"}
        for k in range(1, 8):
            write(os.path.join(d, f"agent{k}.json"),
                  finding_set(k, sid, scores[k], heat_refs if k == 1 else None))
        for name, text in texts.items():
            write(os.path.join(d, f"report_{name}.txt"), text)

        entry = {"study_id": sid, "image": f"{sid}/image.png"}
        if sid != no_mask:
            entry["mask"] = f"{sid}/mask.grid"
        manifest.append(entry)

        row = {}
        for label in EVAL_LABELS:
            if label == "Fracture":
                # The deliberately perfect column: truth follows the prediction.
                cell = "1" if probs[label] >= 0.5 else "0"
            else:
                cell = rng.choice(["1", "0", "0", "-1", ""])
            row[label] = cell
            if cell in ("1", "0"):
                oracle[label][1] += 1
                if (probs[label] >= 0.5) == (cell == "1"):
                    oracle[label][0] += 1
        truth_rows.append((sid, row))

    write(os.path.join(root, "manifest.json"), json.dumps({"studies": manifest}, indent=2) + "\n")
    lines = ["study_id," + ",".join(EVAL_LABELS)]
    for sid, row in truth_rows:
        lines.append(sid + "," + ",".join(row[l] for l in EVAL_LABELS))
    write(os.path.join(root, "gt.csv"), "\n".join(lines) + "\n")
    write(os.path.join(root, "config.json"), json.dumps({"fixtures": ".", "out_dir": "out"}, indent=2) + "\n")

    scored = [oracle[l] for l in EVAL_LABELS if oracle[l][1] > 0]
    macro = sum(c / t for c, t in scored) / len(scored)
    pooled_c = sum(c for c, _ in oracle.values())
    pooled_t = sum(t for _, t in oracle.values())
    write(os.path.join(root, "oracle.json"), json.dumps({
        "threshold": 0.5,
        "cells": {l: {"correct": oracle[l][0], "total": oracle[l][1]} for l in EVAL_LABELS},
        "pooled_correct": pooled_c,
        "pooled_total": pooled_t,
        "macro": macro,
        "micro": pooled_c / pooled_t,
    }, indent=2) + "\n")


# ---------------------------------------------------------------- mcp

def mcp_examples():
    calls = [
        {"jsonrpc": "2.0", "id": 1, "method": "initialize", "params": {}},
        {"jsonrpc": "2.0", "id": 2, "method": "tools/list"},
        {"jsonrpc": "2.0", "id": 3, "method": "tools/call",
         "params": {"name": "cxr_agent_3", "arguments": {"study_id": "case_opacity"}}},
        {"jsonrpc": "2.0", "id": 4, "method": "tools/call",
         "params": {"name": "report_agent_chexagent", "arguments": {"study_id": "case_opacity"}}},
    ]
    write(os.path.join(HERE, "mcp", "example_calls.jsonl"),
          "".join(json.dumps(c) + "\n" for c in calls))


if __name__ == "__main__":
    case_studies()
    anatomy()
    synthetic()
    mcp_examples()
