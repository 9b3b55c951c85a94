# Where does a pear go? Every route from each bin's anchor concept to "pear",
# then the bin whose best route starts with the heaviest edge.
from csk_organizer.fixtures import PEAR_BINS, pear_graph
from csk_organizer.reasoner import SearchConfig, classify, enumerate_paths, render_path, score_path

g = pear_graph()
print(g, "with relations", g.relations)

# all kitchen -> pear routes, best first
for p in enumerate_paths(g, "kitchen", "pear", SearchConfig(beam_width=None)):
    print(f"{score_path(p):5.2f}  {len(p)} hops  {render_path(p)}")

d = classify(g, "pear", PEAR_BINS)
print()
for b in d.per_bin_ranking:
    print(f"{b.bin_id:12s} {b.score!s:6s} {b.path or '-'}")
print(f"\npear -> {d.chosen_bin} ({d.score}) because {d.explanation}")

# average-weight scoring reads the same graph differently
avg = classify(g, "pear", PEAR_BINS, SearchConfig(strategy="average"))
print(f"average scoring: pear -> {avg.chosen_bin} ({avg.score:.3f}) via {avg.explanation}")
