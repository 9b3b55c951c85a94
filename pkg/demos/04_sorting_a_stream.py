# A detector emits labels frame by frame; the organizer places each one and
# writes a log that is enough to rebuild the final state.
import json
import random
import tempfile
from pathlib import Path

from csk_organizer.fixtures import PEAR_BINS, pear_graph
from csk_organizer.pipeline import PipelineConfig, read_log, replay, run, write_log

rng = random.Random(0)
labels = ["pear", "apple", "Fruit", "scissors", "bowl", "table", "unicorn"]
stream = [
    json.dumps({"frame": f, "label": rng.choice(labels), "confidence": round(rng.uniform(0.3, 1), 2), "bbox": [10, 10, 40, 40]})
    for f in range(6)
    for _ in range(2)
]
stream.insert(3, '{"frame": 1, "label": "pear"')  # truncated line

res = run(stream, PEAR_BINS, pear_graph(), PipelineConfig(annotate=True))
print("\n".join(res.annotations))
print(f"\n{len(res.records)} placed or unmatched, {res.skipped_low_confidence} below confidence, {len(res.errors)} bad lines")
print("bins:", res.state.counts(), "unmatched:", [o.concept for o in res.state.unmatched])

log = write_log(res.records, Path(tempfile.mkdtemp()) / "decisions.jsonl")
print("\nfirst log line:", log.read_text().splitlines()[0])
print("replayed state equal:", replay(log, PEAR_BINS) == res.state)
print("entries:", [(e.concept, e.bin) for e in read_log(log)][:4])
