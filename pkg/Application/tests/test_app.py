import unittest
import json
import sys
import os

# Add parent directory to path to import app
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
# Add root directory to path to import src (via app)
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from app import app, APP_STATE


class TestProofToolAPI(unittest.TestCase):
    def setUp(self):
        self.app = app.test_client()
        self.app.testing = True
        self.app.post('/api/proof', json={'name': 'cut_prime'})

    def test_get_corpus(self):
        response = self.app.get('/api/corpus')
        data = json.loads(response.data)
        self.assertIn('proofs', data)
        self.assertIn('cut_prime', data['proofs'])
        self.assertIn('run', data['operations'])

    def test_check_operation(self):
        response = self.app.post('/api/operation', json={'type': 'check'})
        data = json.loads(response.data)

        self.assertEqual(response.status_code, 200)
        self.assertTrue(data['ok'])
        self.assertEqual(data['system'], 'sbl')
        self.assertIn('time_taken', data)

    def test_run_operation(self):
        response = self.app.post('/api/operation', json={'type': 'run'})
        data = json.loads(response.data)

        self.assertTrue(data['cut_free'])
        self.assertEqual([s['case'] for s in data['trace']], ['C2'])
        self.assertIn('(proof lk', data['lk'])

    def test_compare(self):
        response = self.app.post('/api/compare', json={'a': '(w 1)', 'b': '(+ 2 3)'})
        data = json.loads(response.data)
        self.assertEqual(data['ordering'], 'GT')

    def test_malformed_proof_is_rejected(self):
        response = self.app.post('/api/operation', json={'type': 'check', 'proof': '(proof sbl (node'})
        data = json.loads(response.data)

        self.assertEqual(response.status_code, 400)
        self.assertEqual(data['code'], 2)

    def test_unknown_operation(self):
        response = self.app.post('/api/operation', json={'type': 'search'})
        self.assertEqual(response.status_code, 400)

    def test_upload_selects_proof(self):
        text = APP_STATE["proofs"]["cut_disjunction"].encode('utf-8')
        response = self.app.post('/api/upload', data={
            'file': (io_bytes(text), 'mine.sbl')
        }, content_type='multipart/form-data')
        data = json.loads(response.data)

        self.assertEqual(data['name'], 'custom_mine.sbl')
        response = self.app.post('/api/operation', json={'type': 'embed'})
        self.assertIn('(proof sblp', json.loads(response.data)['proof'])


def io_bytes(data: bytes):
    import io
    return io.BytesIO(data)


if __name__ == '__main__':
    unittest.main()
