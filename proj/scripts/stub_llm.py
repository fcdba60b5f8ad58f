#!/usr/bin/env python3
"""Chat-completions stub that answers each prompt stage from a directory of text files.

Used to (re)record corpus transcripts:
    scripts/stub_llm.py corpus/zoo/responses --port 8765 &
    nl2asp simplify --puzzle corpus/zoo/puzzle.txt --record \
        --fixtures corpus/zoo/transcript.jsonl --endpoint http://127.0.0.1:8765/v1/chat/completions
"""
import argparse
import json
import pathlib
from http.server import BaseHTTPRequestHandler, HTTPServer

STAGES = [
    ("List each specific category", "categories"),
    ("List all the entities", "entities"),
    ("Given the following categories and entities", "assignment"),
    ("Given the following lists of entities", "facts"),
    ("Given predicates:", "pairings"),
    ("Create a series of constraints", "simplify"),
]


def make_handler(root):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            prompt = body["messages"][-1]["content"]
            stage = next((s for prefix, s in STAGES if prompt.startswith(prefix)), None)
            if stage is None:
                self.send_error(400, "unknown prompt")
                return
            text = (root / f"{stage}.txt").read_text(encoding="utf-8").rstrip("\n")
            reply = {"choices": [{"index": 0, "message": {"role": "assistant", "content": text}}]}
            data = json.dumps(reply).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    return Handler


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("responses", type=pathlib.Path)
    ap.add_argument("--port", type=int, default=8765)
    args = ap.parse_args()
    HTTPServer(("127.0.0.1", args.port), make_handler(args.responses)).serve_forever()


if __name__ == "__main__":
    main()
