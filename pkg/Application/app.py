from flask import Flask, request, jsonify, Response
import sys
import os
import csv
import io

# Add parent directory to path to allow importing src
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.datasets.data_loaders import load_corpus, load_targeted
from src.prooftheory.proof_codec import format_proof
from src.proof_wrapper import OPERATIONS, ProofWrapper

app = Flask(__name__)

# Proof texts by name, plus the current selection
APP_STATE = {
    "proofs": {},
    "current_name": "cut_prime",
    "last_results": [],
}


def init_proofs():
    """Initialize the bundled corpus"""
    for name, proof in load_corpus().items():
        APP_STATE["proofs"][name] = format_proof(proof)
    try:
        for name, proof in load_targeted().items():
            APP_STATE["proofs"][name] = format_proof(proof)
    except Exception as e:
        print(f"Targeted proofs not loaded: {e}")


init_proofs()


@app.route('/api/corpus', methods=['GET'])
def get_corpus():
    return jsonify({
        "proofs": sorted(APP_STATE["proofs"].keys()),
        "current": APP_STATE["current_name"],
        "operations": list(OPERATIONS),
    })


@app.route('/api/proof', methods=['GET', 'POST'])
def handle_proof():
    if request.method == 'GET':
        return jsonify({"name": APP_STATE["current_name"],
                        "proof": APP_STATE["proofs"][APP_STATE["current_name"]]})

    data = request.json or {}
    name = data.get('name')
    if data.get('proof'):
        name = name or "custom"
        APP_STATE["proofs"][name] = data['proof']
    if name not in APP_STATE["proofs"]:
        return jsonify({"error": "Proof not found"}), 404
    APP_STATE["current_name"] = name
    return jsonify({"success": True, "name": name})


@app.route('/api/upload', methods=['POST'])
def upload_proof():
    if 'file' not in request.files:
        return jsonify({"error": "No file part"}), 400
    file = request.files['file']
    if file.filename == '':
        return jsonify({"error": "No selected file"}), 400
    name = f"custom_{file.filename}"
    APP_STATE["proofs"][name] = file.read().decode('utf-8', errors='ignore')
    APP_STATE["current_name"] = name
    return jsonify({"success": True, "name": name})


@app.route('/api/operation', methods=['POST'])
def run_operation():
    data = request.json or {}
    op_type = data.get('type')
    if op_type not in OPERATIONS:
        return jsonify({"error": f"Unknown operation: {op_type}"}), 400

    payload = {"terms": data.get('terms')}
    if op_type not in ("cmp", "refute"):
        payload["proof"] = data.get('proof') or APP_STATE["proofs"].get(APP_STATE["current_name"])

    res = ProofWrapper.run_operation(op_type, payload, fuel=data.get('fuel'))
    if "error" in res:
        return jsonify(res), 400
    res["name"] = APP_STATE["current_name"]
    APP_STATE["last_results"].append(res)
    # Adopt the rewritten proof so repeated steps walk the reduction sequence
    if op_type == "step" and data.get('advance'):
        APP_STATE["proofs"][APP_STATE["current_name"]] = res["proof"]
    return jsonify(res)


@app.route('/api/compare', methods=['POST'])
def compare_terms():
    data = request.json or {}
    res = ProofWrapper.run_operation("cmp", {"terms": [data.get('a'), data.get('b')]})
    if "error" in res:
        return jsonify(res), 400
    return jsonify(res)


@app.route('/api/export', methods=['GET'])
def export_results():
    if not APP_STATE["last_results"]:
        return jsonify({"error": "No results to export"}), 400

    output = io.StringIO()
    writer = csv.writer(output)

    writer.writerow(['Operation', 'Proof', 'Steps', 'Time (ms)', 'Space (KB)'])
    for result in APP_STATE["last_results"]:
        writer.writerow([
            result.get('operation', 'N/A'),
            result.get('name', ''),
            result.get('steps', ''),
            round(result.get('time_taken', 0) * 1000, 4),
            round(result.get('memory_peak_kb', 0), 2)
        ])

    output.seek(0)
    return Response(
        output.getvalue(),
        mimetype='text/csv',
        headers={'Content-Disposition': 'attachment; filename=results.csv'}
    )


if __name__ == '__main__':
    app.run(debug=True)
