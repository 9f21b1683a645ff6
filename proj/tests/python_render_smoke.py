"""Run generated matplotlib and seaborn scripts under real Python.

Usage: python_render_smoke.py SYNCHART_CLI
Exit 77 (skipped) when the plotting stack is not installed.
"""
import importlib.util
import json
import pathlib
import subprocess
import sys
import tempfile

ENGINES = {"matplotlib": ["matplotlib", "pandas", "numpy"], "seaborn": ["seaborn", "matplotlib", "pandas"]}


def have(modules):
    return all(importlib.util.find_spec(m) is not None for m in modules)


def main():
    cli = sys.argv[1]
    engines = [e for e, mods in ENGINES.items() if have(mods)]
    if not engines or not have(["PIL"]):
        print("plotting stack not installed; skipping")
        return 77
    from PIL import Image

    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "ds"
        subprocess.run([cli, "generate", "--count", "120", "--seed", "5", "--out", str(out),
                        "--engines", ",".join(engines)], check=True, stdout=subprocess.DEVNULL)
        seen, failures = {}, []
        for shard in sorted((out / "shards").glob("*.jsonl")):
            for line in shard.read_text().splitlines():
                rec = json.loads(line)
                key = (rec["spec"]["engine"], rec["spec"]["chart_type"])
                if seen.get(key, 0) >= 2:
                    continue
                seen[key] = seen.get(key, 0) + 1
                work = pathlib.Path(tmp) / rec["record_id"]
                work.mkdir()
                code = rec["code"]
                proc = subprocess.run([sys.executable, "-c", code["source"]], cwd=work,
                                      capture_output=True, text=True, timeout=300)
                target = work / code["output_filename"]
                if proc.returncode != 0 or not target.exists():
                    failures.append((key, proc.stderr[-400:]))
                    continue
                with Image.open(target) as img:
                    img.load()
                    if img.format != "JPEG" or min(img.size) < 64:
                        failures.append((key, f"bad image {img.format} {img.size}"))
        print(f"rendered {sum(seen.values())} scripts over {len(seen)} engine/type pairs")
        for key, err in failures:
            print("FAILED", key, err)
        return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
