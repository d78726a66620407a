from arlbsg.loaders.panel import load_panel_csv, load_partitions_csv
from arlbsg.loaders.draws import read_draws, read_fit_draws
