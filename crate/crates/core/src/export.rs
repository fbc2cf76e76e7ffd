//! Text artifact writers: CSV tables, PGM/PPM images and gnuplot scripts.
//!
//! Floats are written with 17 significant digits so every value round-trips.

use std::io::{self, Write};

use crate::basin::{AttractorLabel, BasinGrid, ScalingFit};
use crate::bifurcation::{BifurcationData, ChaosPoint};
use crate::equilibria::StabilityReport;
use crate::integrate::Trajectory;
use crate::lyapunov::TracePoint;
use crate::robot::{drive_inputs, Navigation, RobotConfig};

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn row<W: Write>(w: &mut W, cells: &[f64]) -> io::Result<()> {
    let line: Vec<String> = cells.iter().map(|v| num(*v)).collect();
    writeln!(w, "{}", line.join(","))
}

/// `t,x,y,z` for 3-D runs, `t,x,y,z,X,Y,theta` for 6-D runs.
pub fn write_trajectory<W: Write, const N: usize>(w: &mut W, traj: &Trajectory<N>) -> io::Result<()> {
    let header = match N {
        3 => "t,x,y,z".to_string(),
        6 => "t,x,y,z,X,Y,theta".to_string(),
        _ => std::iter::once("t".to_string())
            .chain((0..N).map(|i| format!("s{i}")))
            .collect::<Vec<_>>()
            .join(","),
    };
    writeln!(w, "{header}")?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut cells = Vec::with_capacity(N + 1);
        cells.push(*t);
        cells.extend_from_slice(s);
        row(w, &cells)?;
    }
    Ok(())
}

/// Circuit-time trajectory `tau,wx,wy,wz`.
pub fn write_circuit_trajectory<W: Write>(w: &mut W, traj: &Trajectory<3>) -> io::Result<()> {
    writeln!(w, "tau,wx,wy,wz")?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        row(w, &[*t, s[0], s[1], s[2]])?;
    }
    Ok(())
}

/// `t,x,y,z,X,Y,theta,v,mu,covered_fraction`.
pub fn write_navigation<W: Write>(w: &mut W, nav: &Navigation, cfg: &RobotConfig) -> io::Result<()> {
    writeln!(w, "t,x,y,z,X,Y,theta,v,mu,covered_fraction")?;
    let traj = &nav.trajectory;
    for ((t, s), (_, frac)) in traj.times.iter().zip(&traj.states).zip(&nav.coverage.series) {
        let (v, mu) = drive_inputs(s[0], s[1], cfg);
        row(w, &[*t, s[0], s[1], s[2], s[3], s[4], s[5], v, mu, *frac])?;
    }
    Ok(())
}

/// `a8,eq_id,re1,im1,re2,im2,re3,im3,class`.
pub fn write_stability<W: Write>(w: &mut W, reports: &[StabilityReport]) -> io::Result<()> {
    writeln!(w, "a8,eq_id,re1,im1,re2,im2,re3,im3,class")?;
    for r in reports {
        let mut line = vec![num(r.a8), r.id.to_string()];
        match &r.eigenvalues {
            Some(ev) => {
                for z in ev {
                    line.push(num(z.re));
                    line.push(num(z.im));
                }
            }
            None => line.extend(std::iter::repeat_n("nan".to_string(), 6)),
        }
        line.push(r.class.map_or("absent".to_string(), |c| c.to_string()));
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// `t,L1,L2,L3`.
pub fn write_lyapunov_trace<W: Write>(w: &mut W, trace: &[TracePoint]) -> io::Result<()> {
    writeln!(w, "t,L1,L2,L3")?;
    for p in trace {
        row(w, &[p.t, p.exponents[0], p.exponents[1], p.exponents[2]])?;
    }
    Ok(())
}

/// `a8,xmax`.
pub fn write_bifurcation<W: Write>(w: &mut W, data: &BifurcationData) -> io::Result<()> {
    writeln!(w, "a8,xmax")?;
    for &(a8, x) in &data.rows {
        row(w, &[a8, x])?;
    }
    Ok(())
}

/// `a8,L1`; escaped points carry `nan`.
pub fn write_chaos_mask<W: Write>(w: &mut W, points: &[ChaosPoint]) -> io::Result<()> {
    writeln!(w, "a8,L1")?;
    for p in points {
        row(w, &[p.a8, p.l1])?;
    }
    Ok(())
}

/// `x0,y0,label`, row-major from the lower-left cell.
pub fn write_basin_csv<W: Write>(w: &mut W, grid: &BasinGrid) -> io::Result<()> {
    writeln!(w, "x0,y0,label")?;
    for j in 0..grid.spec.ny {
        for i in 0..grid.spec.nx {
            let (x, y) = grid.spec.cell_center(i, j);
            writeln!(w, "{},{},{}", num(x), num(y), grid.label(i, j))?;
        }
    }
    Ok(())
}

/// Binary PPM (P6), top image row = largest `y0`.
pub fn write_basin_ppm<W: Write>(w: &mut W, grid: &BasinGrid) -> io::Result<()> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    write!(w, "P6\n{nx} {ny}\n255\n")?;
    let mut buf = Vec::with_capacity(3 * nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            buf.extend_from_slice(&grid.label(i, j).color());
        }
    }
    w.write_all(&buf)
}

/// Grey level used by the PGM writer.
pub fn label_grey(label: AttractorLabel) -> u8 {
    match label {
        AttractorLabel::Chaotic1 => 64,
        AttractorLabel::Chaotic2 => 128,
        AttractorLabel::FixedPoint1 => 0,
        AttractorLabel::FixedPoint2 => 192,
        AttractorLabel::Escaped | AttractorLabel::Undecided => 255,
    }
}

/// Binary PGM (P5) with the grey levels of [`label_grey`].
pub fn write_basin_pgm<W: Write>(w: &mut W, grid: &BasinGrid) -> io::Result<()> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    write!(w, "P5\n{nx} {ny}\n255\n")?;
    let buf: Vec<u8> = (0..ny)
        .rev()
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| label_grey(grid.label(i, j)))
        .collect();
    w.write_all(&buf)
}

/// `r,P`.
pub fn write_scaling<W: Write>(w: &mut W, fit: &ScalingFit) -> io::Result<()> {
    writeln!(w, "r,P")?;
    for (r, p) in fit.radii.iter().zip(&fit.probabilities) {
        row(w, &[*r, *p])?;
    }
    Ok(())
}

/// Gnuplot script for a phase portrait and time series of `csv`.
pub fn gnuplot_trajectory(csv: &str, png: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 1200,500\n\
         set output '{png}'\n\
         set multiplot layout 1,2\n\
         set xlabel 'x'; set ylabel 'z'\n\
         plot '{csv}' every ::1 using 2:4 with lines lw 0.5 notitle\n\
         set xlabel 't'; set ylabel 'x'\n\
         plot '{csv}' every ::1 using 1:2 with lines lw 0.5 notitle\n\
         unset multiplot\n"
    )
}

/// Gnuplot script for the robot path in the workspace.
pub fn gnuplot_robot(csv: &str, png: &str, cfg: &RobotConfig) -> String {
    let (x0, x1, y0, y1) = cfg.workspace;
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 700,700\n\
         set output '{png}'\n\
         set size square\n\
         set xrange [{x0}:{x1}]; set yrange [{y0}:{y1}]\n\
         set grid xtics ytics\n\
         set xlabel 'X'; set ylabel 'Y'\n\
         plot '{csv}' every ::1 using 5:6 with lines lw 0.5 notitle\n"
    )
}

/// Gnuplot script for the log-time convergence of the exponents.
pub fn gnuplot_lyapunov(csv: &str, png: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 900,500\n\
         set output '{png}'\n\
         set logscale x\n\
         set xlabel 't'; set ylabel 'exponent'\n\
         plot for [k=2:4] '{csv}' every ::1 using 1:k with lines title columnhead(k)\n"
    )
}

/// Gnuplot script for the `a8,xmax` scatter.
pub fn gnuplot_bifurcation(csv: &str, png: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 900,500\n\
         set output '{png}'\n\
         set xlabel 'a8'; set ylabel 'local max of x'\n\
         plot '{csv}' every ::1 using 1:2 with dots notitle\n"
    )
}

/// Gnuplot script for the log-log `r,P` data and the fitted power law.
pub fn gnuplot_scaling(csv: &str, png: &str, fit: &ScalingFit) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 700,500\n\
         set output '{png}'\n\
         set logscale xy\n\
         set xlabel 'r'; set ylabel 'P'\n\
         plot '{csv}' every ::1 using 1:2 with points pt 7 notitle, \
         {p0} * x**(-{gamma}) title 'fit'\n",
        p0 = num(fit.p0),
        gamma = num(fit.gamma),
    )
}
