from arlbsg.dumpers.draws import write_draws, export_draws_csv
from arlbsg.dumpers.panel import write_panel_csv, write_truth
from arlbsg.dumpers.manifest import build_manifest, write_manifest, \
    read_manifest, record_timing
