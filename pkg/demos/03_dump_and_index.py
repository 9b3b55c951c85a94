# From an assertions dump (tab-separated, one JSON blob per row) to a compact
# binary index that loads without re-parsing.
import tempfile
from pathlib import Path

from csk_organizer.fixtures import PEAR_EDGES, assertion_line, write_assertions
from csk_organizer.kg import load_dump, load_index, save_index

work = Path(tempfile.mkdtemp())
dump = write_assertions(PEAR_EDGES, work / "assertions.csv")
# a German row and a duplicate triple, both of which the loader screens out
with dump.open("a") as fh:
    fh.write(assertion_line("birne", "kueche", "AtLocation", 2.0, lang="de") + "\n")
    fh.write(assertion_line("food", "kitchen", "AtLocation", 1.0) + "\n")
print(dump.read_text().splitlines()[0])

g = load_dump(dump)
m = g.metadata
print(f"\n{m.rows_total} rows -> {m.edge_count} edges over {m.node_count} concepts")
print(f"filtered {m.filtered} (language {m.filtered_language}), duplicates collapsed {m.duplicates_collapsed}")
print("food -> kitchen kept at", g.edge_weight("food", "kitchen", "AtLocation"))

idx = save_index(g, work / "pear.cskg")
print(f"\nindex {idx.stat().st_size} bytes vs dump {dump.stat().st_size} bytes")
h = load_index(idx, dump)
print("round trip identical:", h == g, "| warnings:", h.metadata.warnings)

# the index remembers which dump it came from
dump.write_text(dump.read_text() + assertion_line("x", "y", "IsA", 1.0) + "\n")
print("after editing the dump:", load_index(idx, dump).metadata.warnings)

for e, how in g.neighbors("kitchen"):
    print(f"  {how.value:8s} {e.start} -{e.relation}-> {e.end} {e.weight}")
