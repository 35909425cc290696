//! Plot scripts for offline inspection. The scripts target matplotlib and
//! read the data file at run time; nothing is rendered here.

use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{CliError, CliResult};
use crate::density::GRID_HEADER;
use crate::deployment::POINTS_HEADER;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Points,
    Grid,
}

pub fn detect(path: &Path) -> CliResult<DataKind> {
    let f = std::fs::File::open(path).map_err(super::with_path(path))?;
    let mut first = String::new();
    BufReader::new(f).read_line(&mut first)?;
    let header = first.trim_end();
    let shown: String = header.chars().take(60).collect();
    if header == POINTS_HEADER.join(",") {
        Ok(DataKind::Points)
    } else if header == GRID_HEADER.join(",") {
        Ok(DataKind::Grid)
    } else {
        Err(CliError::Usage(format!(
            "{}: unrecognized header {shown:?}; expected a points or grid CSV",
            path.display()
        )))
    }
}

pub fn script_for(input: &Path, image: &Path) -> CliResult<String> {
    let kind = detect(input)?;
    let data = py_str(&input.display().to_string());
    let image = py_str(&image.display().to_string());
    Ok(match kind {
        DataKind::Points => format!(
            r#"# Scatter plot of a generated deployment, one colour per sector.
import numpy as np
import matplotlib.pyplot as plt

data = np.loadtxt({data}, delimiter=",", skiprows=1, ndmin=2)
x, y = data[:, 0], data[:, 1]
# one palette entry per (layer, sector)
_, group = np.unique(data[:, 2:4], axis=0, return_inverse=True)
group = group.ravel() % 20

fig, ax = plt.subplots(figsize=(6, 6))
ax.scatter(x, y, c=group, s=2, cmap="tab20", vmin=0, vmax=19, linewidths=0)
ax.set_aspect("equal")
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_title("{{}} nodes".format(len(x)))
fig.tight_layout()
fig.savefig({image}, dpi=150)
"#
        ),
        DataKind::Grid => format!(
            r#"# Heat map of an estimated spatial density grid.
import numpy as np
import matplotlib.pyplot as plt

data = np.loadtxt({data}, delimiter=",", skiprows=1, ndmin=2)
i = data[:, 0].astype(int)
j = data[:, 1].astype(int)
nx, ny = i.max() + 1, j.max() + 1
pdf = np.zeros((ny, nx))
pdf[j, i] = data[:, 5]
xc = np.unique(data[:, 2])
yc = np.unique(data[:, 3])
dx = xc[1] - xc[0] if nx > 1 else 1.0
dy = yc[1] - yc[0] if ny > 1 else 1.0
extent = [xc[0] - dx / 2, xc[-1] + dx / 2, yc[0] - dy / 2, yc[-1] + dy / 2]

fig, ax = plt.subplots(figsize=(6, 5))
im = ax.imshow(pdf, origin="lower", extent=extent, cmap="viridis", aspect="equal")
fig.colorbar(im, ax=ax, label="estimated pdf")
ax.set_xlabel("x")
ax.set_ylabel("y")
fig.tight_layout()
fig.savefig({image}, dpi=150)
"#
        ),
    })
}

fn py_str(s: &str) -> String {
    format!("{:?}", s)
}
