#!/usr/bin/env python3
"""Regenerate the bundled synthetic seed-label starter set (200 sentences).

The set exists so the classifier can be exercised end to end without any
proprietary training data: 100 informative sentences (bug reports, feature
requests, concrete quality feedback) and 100 non-informative ones (bare
praise, filler, ratings talk). Deterministic; rerunning reproduces the
bundled file byte for byte.
"""

import json
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "notematch" / "data" / "seed_labels.jsonl"

INFORMATIVE_TEMPLATES = [
    "The app crashes every time I open the {noun}.",
    "Please add a {adj} mode for the {noun}.",
    "The {noun} freezes when I tap the {noun2} button.",
    "I keep getting an error when loading the {noun}.",
    "Fix the bug where the {noun} disappears after an update.",
    "It would be great to have an option to sort the {noun} by date.",
    "The {noun} drains my battery much faster since the last version.",
    "Uploading a {noun} fails on slow connections.",
    "Notifications for the {noun} arrive hours late.",
    "The search cannot find my saved {noun} anymore.",
    "Scrolling through the {noun} is laggy on older phones.",
    "Please let us export the {noun} to a file.",
    "Login fails with a server error after changing my password.",
    "The {adj} layout cuts off text in the {noun}.",
    "Syncing the {noun} between devices loses my changes.",
    "The app logs me out whenever I switch to another {noun}.",
    "Playback stops when the screen locks during a {noun}.",
    "Dark theme makes the {noun} unreadable.",
    "Add support for landscape view in the {noun}.",
    "The update removed the {noun} shortcut I used daily.",
]

NON_INFORMATIVE_TEMPLATES = [
    "I love this app so much.",
    "Best app ever, five stars.",
    "This app is {adj}.",
    "Great job, keep it up.",
    "Amazing, simply amazing.",
    "I use it every day and it is {adj}.",
    "My whole family loves it.",
    "Five stars from me.",
    "So good, thank you.",
    "Absolutely {adj}, would recommend.",
    "Love love love it.",
    "This is my favorite app.",
    "Perfect in every way.",
    "Nothing to complain about, just {adj}.",
    "Wonderful experience overall.",
    "Thanks for the great work.",
    "Really enjoying it so far.",
    "Two thumbs up.",
    "It is simply the best.",
    "Happy with everything.",
]

NOUNS = ["playlist", "profile", "library", "feed", "cart", "inbox", "gallery",
         "album", "timeline", "dashboard"]
ADJS = ["dark", "compact", "awesome", "fantastic", "wonderful", "great",
        "perfect", "excellent", "lovely", "brilliant"]


def sentences(templates, label, count):
    out = []
    i = 0
    while len(out) < count:
        template = templates[i % len(templates)]
        noun = NOUNS[i % len(NOUNS)]
        noun2 = NOUNS[(i + 3) % len(NOUNS)]
        adj = ADJS[i % len(ADJS)]
        text = template.format(noun=noun, noun2=noun2, adj=adj)
        out.append({"text": text, "label": label})
        i += 1
    return out


def main():
    rows = sentences(INFORMATIVE_TEMPLATES, "informative", 100)
    rows += sentences(NON_INFORMATIVE_TEMPLATES, "non-informative", 100)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} seed sentences to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
