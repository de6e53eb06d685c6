"""
Normalization Results Visualizer
Reads normalization_results.json and trace files and plots step counts,
reduction cases, scaling and ordinal descent
"""

import json
import sys
from collections import Counter
from functools import cmp_to_key
from pathlib import Path
from typing import List

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import seaborn as sns

from src.prooftheory.ordinal_notation import compare
from src.prooftheory.reduction_engine import CASES, parse_trace

# Set style for publication-quality plots
plt.style.use('seaborn-v0_8-darkgrid')
sns.set_palette("husl")


def ordinal_ranks(terms: List) -> List[int]:
    """Position of each term among the distinct terms, smallest first."""
    distinct = sorted(set(terms), key=cmp_to_key(compare))
    rank = {t: i for i, t in enumerate(distinct)}
    return [rank[t] for t in terms]


class ResultsVisualizer:
    """Visualize normalization results from a JSON file."""

    def __init__(self, json_file: str = "results/normalization_results.json",
                 output_dir: str = "results/plots"):
        self.json_file = Path(json_file)
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

        with open(self.json_file, 'r') as f:
            data = json.load(f)
        self.results = data.get("runs", [])
        self.sweeps = data.get("sweeps", [])

        print(f"✓ Loaded {len(self.results)} normalization runs from {self.json_file}")

        self.colors = {
            'corpus': '#457B9D',
            'targeted': '#E63946',
            'generated': '#2A9D8F',
        }

    def _ok(self, source: str = None):
        return [r for r in self.results if not r.get('error') and (source is None or r['source'] == source)]

    def generate_all_plots(self):
        print("\n" + "="*70)
        print("GENERATING ALL VISUALIZATIONS")
        print("="*70)
        self.plot_steps_per_proof()
        self.plot_case_distribution()
        self.plot_scaling()
        print("\n" + "="*70)
        print(f"Plots saved to: {self.output_dir}")
        print("="*70)

    def plot_steps_per_proof(self):
        """Plot: Bar chart of reduction steps per proof, coloured by source."""
        print("  Creating: Steps per Proof...")
        runs = self._ok()
        if not runs:
            print("    ⚠️  No successful runs, skipped")
            return

        fig, ax = plt.subplots(figsize=(10, 6))
        names = [r['name'] for r in runs]
        colors = [self.colors.get(r['source'], '#888888') for r in runs]
        ax.bar(names, [r['steps'] for r in runs], color=colors, alpha=0.85)
        ax.set_xlabel('Proof', fontsize=13, fontweight='bold')
        ax.set_ylabel('Reduction steps', fontsize=13, fontweight='bold')
        ax.set_title('Steps to a Cut-Free Proof', fontsize=14, fontweight='bold')
        plt.setp(ax.get_xticklabels(), rotation=45, ha='right')

        plt.tight_layout()
        plt.savefig(self.output_dir / 'steps_per_proof.png', dpi=300, bbox_inches='tight')
        print("    ✓ Saved: steps_per_proof.png")
        plt.close()

    def plot_case_distribution(self):
        """Plot: How often each reduction case fired over all runs."""
        print("  Creating: Case Distribution...")
        counts = Counter()
        for r in self._ok():
            counts.update(r.get('cases', {}))

        fig, ax = plt.subplots(figsize=(10, 6))
        sns.barplot(x=list(CASES), y=[counts.get(c, 0) for c in CASES], ax=ax, color='#457B9D')
        ax.set_xlabel('Case', fontsize=13, fontweight='bold')
        ax.set_ylabel('Occurrences', fontsize=13, fontweight='bold')
        ax.set_title('Reduction Cases Applied', fontsize=14, fontweight='bold')

        plt.tight_layout()
        plt.savefig(self.output_dir / 'case_distribution.png', dpi=300, bbox_inches='tight')
        print("    ✓ Saved: case_distribution.png")
        plt.close()

    def plot_scaling(self):
        """Plot: Embedding and normalization time against cut-chain depth."""
        print("  Creating: Scaling over Generated Chains...")
        runs = sorted(self._ok('generated'), key=lambda r: r['proof_size'])
        if not runs:
            print("    ⚠️  No generated runs, skipped")
            return

        sizes = [r['proof_size'] for r in runs]
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(14, 6))
        ax1.plot(sizes, [r['embed_time_ms'] for r in runs], marker='o', linewidth=2.5, label='embed')
        ax1.errorbar(sizes, [r['normalize_time_ms'] for r in runs], yerr=[r['time_ms_std'] for r in runs],
                     marker='s', linewidth=2.5, capsize=5, label='normalize')
        ax1.set_xlabel('Embedded proof size (nodes)', fontsize=13, fontweight='bold')
        ax1.set_ylabel('Time (ms)', fontsize=13, fontweight='bold')
        ax1.legend(fontsize=11, loc='upper left')

        ax2.plot(sizes, [r['steps'] for r in runs], marker='o', linewidth=2.5, color=self.colors['generated'])
        ax2.set_xlabel('Embedded proof size (nodes)', fontsize=13, fontweight='bold')
        ax2.set_ylabel('Reduction steps', fontsize=13, fontweight='bold')
        fig.suptitle('Scaling over Cut Chains', fontsize=14, fontweight='bold')

        plt.tight_layout()
        plt.savefig(self.output_dir / 'scaling.png', dpi=300, bbox_inches='tight')
        print("    ✓ Saved: scaling.png")
        plt.close()

    def plot_trace(self, trace_file: str):
        """Plot: The proof ordinal after every step of one trace, as a rank among its values."""
        steps = parse_trace(Path(trace_file).read_text(encoding="utf-8"))
        if not steps:
            print(f"    ⚠️  {trace_file} is empty, skipped")
            return None
        ordinals = [steps[0]['o_before']] + [s['o_after'] for s in steps]
        ranks = ordinal_ranks(ordinals)

        fig, ax = plt.subplots(figsize=(10, 6))
        ax.plot(np.arange(len(ranks)), ranks, marker='o', linewidth=2.5)
        for i, s in enumerate(steps, start=1):
            ax.annotate(s['case'], (i, ranks[i]), textcoords="offset points", xytext=(0, 8), ha='center')
        ax.set_xlabel('Step', fontsize=13, fontweight='bold')
        ax.set_ylabel('Ordinal rank', fontsize=13, fontweight='bold')
        ax.set_title(f'Ordinal Descent ({Path(trace_file).stem})', fontsize=14, fontweight='bold')

        out = self.output_dir / f'{Path(trace_file).stem}_descent.png'
        plt.tight_layout()
        plt.savefig(out, dpi=300, bbox_inches='tight')
        print(f"    ✓ Saved: {out.name}")
        plt.close()
        return out

    def generate_summary_table(self):
        print("\n" + "="*80)
        print("SUMMARY STATISTICS")
        print("="*80)
        for source in sorted(set(r['source'] for r in self.results)):
            runs = self._ok(source)
            failed = len([r for r in self.results if r['source'] == source]) - len(runs)
            print(f"\n{source}: {len(runs)} normalized, {failed} failed")
            if not runs:
                continue
            times = [r['time_ms'] for r in runs]
            steps = [r['steps'] for r in runs]
            print(f"  Time (ms):  mean {np.mean(times):>10.2f}  median {np.median(times):>10.2f}  "
                  f"max {np.max(times):>10.2f}")
            print(f"  Steps:      mean {np.mean(steps):>10.2f}  max {np.max(steps):>10d}")
        for s in self.sweeps:
            print(f"\n{s['name']} (depth {s['depth']}): {s['checked']} checked, {s['violations']} violations")
        print("\n" + "="*80)


def main():
    json_file = "results/normalization_results.json"
    if len(sys.argv) > 1:
        json_file = sys.argv[1]

    if not Path(json_file).exists():
        print(f"❌ Error: File '{json_file}' not found!")
        print(f"   Usage: python {sys.argv[0]} [path_to_json_file] [trace files...]")
        return

    visualizer = ResultsVisualizer(json_file, output_dir="results/plots")
    visualizer.generate_all_plots()
    for trace_file in sys.argv[2:]:
        visualizer.plot_trace(trace_file)
    visualizer.generate_summary_table()

    print(f"\n✅ All visualizations complete!")
    print(f"📁 Check the '{visualizer.output_dir}' directory for all plots.")


if __name__ == "__main__":
    main()
