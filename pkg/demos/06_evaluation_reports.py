# The four evaluation protocols, each written out as a CSV plus a JSON summary.
import json
import tempfile
from pathlib import Path

from csk_organizer.evalharness import (
    CSKClassifier,
    GroundTruth,
    RoundRobinClassifier,
    TrialSpec,
    run_accuracy,
    run_adaptability,
    run_consistency,
    run_explainability_audit,
    write_reports,
)
from csk_organizer.fixtures import APPLE_BINS, APPLE_EDGES, PEAR_BINS, PEAR_EDGES
from csk_organizer.kg import KnowledgeGraph
from csk_organizer.pipeline import run, write_log

g = KnowledgeGraph.from_edges(PEAR_EDGES + APPLE_EDGES)
csk = CSKClassifier(g)
specs = [TrialSpec(o, PEAR_BINS, 10) for o in ("pear", "apple", "food", "table", "scissors")]

cons = run_consistency(specs, csk)
print("consistency:", cons.consistency_rates)
print("coin-flip stub:", run_consistency(specs[:1], RoundRobinClassifier(["kitchen", "pantry"])).consistency_rates)

truth = GroundTruth.from_rows([("pear", "kitchen"), ("apple", "kitchen"), ("food", "kitchen"), ("table", "dining_room")])
acc = run_accuracy(specs[:4], truth, csk)
print("accuracy:", acc.accuracy)

adapt = run_adaptability("apple", APPLE_BINS, csk)
print("adaptability:", adapt.verdict)

work = Path(tempfile.mkdtemp())
lines = [json.dumps({"frame": i, "label": s.object, "confidence": 0.9, "bbox": [0, 0, 1, 1]}) for i, s in enumerate(specs)]
log = write_log(run(lines, PEAR_BINS, g).records, work / "log.jsonl")
audit = run_explainability_audit(log, g)
print("audit:", audit.audit_counts)

out = write_reports([cons, acc, adapt, audit], work / "reports")
print("\nwrote", sorted(p.name for p in out.iterdir()))
print((out / "adaptability.csv").read_text())
