/** Figure assemblies: build panel specs from a simulator output directory. */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import {
  SpectrumSeries,
  crossingPosition,
  groupSpectrum,
  peakPosition,
} from "./analyze.js";
import { CsvTable, numericColumn, parseCsv, requireColumns, stringColumn } from "./csv.js";
import { Curve, PanelSpec, renderFigure } from "./panels.js";

const PALETTE = ["#2166ac", "#b2182b", "#1b7837", "#762a83", "#e08214", "#40496b"];

function loadCsv(dir: string, name: string): CsvTable {
  return parseCsv(readFileSync(join(dir, name), "utf-8"), join(dir, name));
}

function spectrumFromTable(table: CsvTable): SpectrumSeries {
  requireColumns(table, ["sweep_value", "label", "energy"]);
  return groupSpectrum(
    numericColumn(table, "sweep_value"),
    stringColumn(table, "label"),
    numericColumn(table, "energy")
  );
}

function spectrumCurves(
  spectrum: SpectrumSeries,
  labels: string[],
  color: string,
  dashed: boolean,
  tagFirst: string
): Curve[] {
  return labels
    .filter((label) => spectrum.energyByLabel.has(label))
    .map((label, i) => ({
      yColumn: "",
      label: i === 0 ? tagFirst : "",
      color,
      dashed,
      data: { x: spectrum.x, y: spectrum.energyByLabel.get(label)! },
    }));
}

const SPECTRUM_LABELS = ["1-", "1+", "2-", "2+", "3-", "3+"];

export interface FigureResult {
  svg: string;
  annotations: Record<string, number>;
}

/** Spectra vs coupling plus the two zero-delay correlation sweeps. */
export function buildFig2(dir: string): FigureResult {
  const bare = loadCsv(dir, "fig2a_rabi.csv");
  const dia = loadCsv(dir, "fig2a_diamagnetic.csv");
  const specBare = spectrumFromTable(bare);
  const specDia = spectrumFromTable(dia);
  const gc = crossingPosition(specBare, "2-", "1+");

  const panelA: PanelSpec = {
    table: bare,
    xColumn: "sweep_value",
    curves: [
      ...spectrumCurves(specBare, SPECTRUM_LABELS, PALETTE[0], false, "bare"),
      ...spectrumCurves(specDia, SPECTRUM_LABELS, PALETTE[1], true, "diamagnetic"),
    ],
    xLabel: "coupling / resonator frequency",
    yLabel: "energy above ground",
    title: "(a) dressed level structure",
    annotations:
      gc === null ? [] : [{ kind: "vline", x: gc, label: `crossing ${gc.toFixed(3)}` }],
  };

  const g2Curves = (table: CsvTable): Curve[] => [
    { yColumn: "g2_sigma_x", label: "dipole", color: PALETTE[0], table },
    { yColumn: "g2_d_sigma_x", label: "1st derivative", color: PALETTE[2], table },
    { yColumn: "g2_dd_sigma_x", label: "2nd derivative", color: PALETTE[1], table },
  ];
  const fig2b = loadCsv(dir, "fig2b.csv");
  const fig2c = loadCsv(dir, "fig2c.csv");
  for (const t of [fig2b, fig2c]) {
    requireColumns(t, ["lambda", "g2_sigma_x", "g2_d_sigma_x", "g2_dd_sigma_x"]);
  }

  const panelB: PanelSpec = {
    table: fig2b,
    xColumn: "lambda",
    curves: g2Curves(fig2b),
    xLabel: "coupling / resonator frequency",
    yLabel: "zero-delay correlation",
    title: "(b) bare model",
    logY: true,
    annotations:
      gc === null ? [] : [{ kind: "vline", x: gc, label: "crossing" }],
  };
  const panelC: PanelSpec = {
    table: fig2c,
    xColumn: "lambda",
    curves: g2Curves(fig2c),
    xLabel: "coupling / resonator frequency",
    yLabel: "zero-delay correlation",
    title: "(c) with diamagnetic term",
    logY: true,
  };

  const annotations: Record<string, number> = {};
  if (gc !== null) annotations.crossing = gc;
  return { svg: renderFigure([panelA, panelB, panelC]), annotations };
}

/** Biased-qubit spectrum, driven stationary sweep and delayed correlations. */
export function buildFig3(dir: string): FigureResult {
  const spectrumTable = loadCsv(dir, "fig3a.csv");
  const spec3a = spectrumFromTable(spectrumTable);
  const panelA: PanelSpec = {
    table: spectrumTable,
    xColumn: "sweep_value",
    curves: spectrumCurves(spec3a, SPECTRUM_LABELS, PALETTE[0], false, ""),
    xLabel: "flux bias / resonator frequency",
    yLabel: "energy above ground",
    title: "(a) spectrum vs flux bias",
  };

  const sweep = loadCsv(dir, "fig3b.csv");
  requireColumns(sweep, ["epsilon", "g2_zero", "pop_1plus", "omega_d"]);
  const eps = numericColumn(sweep, "epsilon");
  const g2 = numericColumn(sweep, "g2_zero");
  const pop = numericColumn(sweep, "pop_1plus");
  const peak = peakPosition(eps, g2);
  const popScale = Math.max(...g2) / Math.max(...pop);
  const panelB: PanelSpec = {
    table: sweep,
    xColumn: "epsilon",
    curves: [
      { yColumn: "g2_zero", label: "zero-delay correlation", color: "#555" },
      {
        yColumn: "",
        label: "target population (scaled)",
        color: PALETTE[2],
        dashed: true,
        data: { x: eps, y: pop.map((v) => v * popScale) },
      },
    ],
    xLabel: "flux bias / resonator frequency",
    yLabel: "stationary correlation",
    title: "(b) driven stationary statistics",
    annotations: [
      { kind: "marker", x: peak.x, y: peak.y, label: `peak ${peak.y.toFixed(1)} at ${peak.x.toFixed(2)}` },
    ],
  };

  const tau = loadCsv(dir, "fig3c.csv");
  requireColumns(tau, ["tau_gamma", "g2_eps0", "g2_eps035"]);
  const panelC: PanelSpec = {
    table: tau,
    xColumn: "tau_gamma",
    curves: [
      { yColumn: "g2_eps0", label: "zero bias", color: PALETTE[1], dashed: true },
      { yColumn: "g2_eps035", label: "peak bias", color: PALETTE[0] },
    ],
    xLabel: "delay x qubit decay rate",
    yLabel: "delayed correlation",
    title: "(c) delayed correlations",
    annotations: [{ kind: "hline", y: 1.0, label: "uncorrelated" }],
  };

  return {
    svg: renderFigure([panelA, panelB, panelC]),
    annotations: { peak_x: peak.x, peak_y: peak.y },
  };
}
