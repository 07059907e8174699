#!/usr/bin/env python3
"""Latency experiment against a running scoring service: sends repeated
/score requests with a long paragraph payload and prints percentiles.

Usage: python scripts/bench_service.py [--url http://127.0.0.1:8000] [--n 200]
"""
import argparse
import json
import time
import urllib.request

import numpy as np

WORDS = (
    "the committee reviewed the report and published its findings on schedule "
    "officials said the new measures would take effect next month and analysts "
    "expect steady progress across the sector while residents await details"
).split()


def request_body(n_words: int = 500) -> dict:
    rng = np.random.default_rng(0)
    paragraph = " ".join(str(rng.choice(WORDS)) for _ in range(n_words))
    return {
        "postText": "You won't believe what this report says about the budget",
        "targetTitle": "A detailed look at the budget this year",
        "targetDescription": "a budget article about recent developments",
        "targetParagraphs": [paragraph],
        "targetKeywords": "budget, news, report",
        "targetCaptions": ["photo of the committee"],
    }


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--url", default="http://127.0.0.1:8000")
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--words", type=int, default=500)
    args = parser.parse_args()

    payload = json.dumps(request_body(args.words)).encode("utf-8")
    timings = []
    for i in range(args.n + 5):
        req = urllib.request.Request(
            f"{args.url}/score", data=payload, headers={"Content-Type": "application/json"}
        )
        t0 = time.perf_counter()
        with urllib.request.urlopen(req) as response:
            body = json.loads(response.read())
        elapsed = time.perf_counter() - t0
        if i >= 5:  # discard warm-up
            timings.append(elapsed)
    timings_ms = np.array(timings) * 1000.0
    print(f"requests: {len(timings_ms)} (payload {args.words}-word paragraph)")
    for q in (50, 90, 95, 99):
        print(f"p{q}: {np.percentile(timings_ms, q):8.1f} ms")
    print(f"max: {timings_ms.max():8.1f} ms")
    print(f"last probability: {body['probability']:.4f} ({body['label']})")


if __name__ == "__main__":
    main()
