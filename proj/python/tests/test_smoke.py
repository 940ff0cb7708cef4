# SPDX-License-Identifier: Apache-2.0
"""End-to-end smoke tests for the Python bindings."""

import math

import pytest

import relrec


def small_corpus(n_videos=120, n_topics=4, n_pairs=1500, seed=11):
    cfg = relrec.SynthConfig()
    cfg.n_videos = n_videos
    cfg.n_topics = n_topics
    cfg.n_pairs = n_pairs
    cfg.seed = seed
    return relrec.generate_corpus(cfg)


def test_scalar_primitives_match_known_values():
    assert relrec.cosine_similarity([1.0, 0.0], [4.0, 3.0]) == 0.8
    assert abs(relrec.opc_weight(1.0) - 1 / math.log(2)) < 1e-15
    assert abs(relrec.opc_weight(math.e - 1.0) - 1.0) <= 1e-12
    assert relrec.opc_weight(10.0) > relrec.opc_weight(100.0)

    l_co, l_sem = relrec.pair_losses(0.5, 1)
    assert abs(l_co - math.log(2)) < 1e-15
    assert l_sem == l_co
    assert relrec.pair_losses(0.5, 0)[1] == 0.0

    p = relrec.sampled_softmax_prob(2.0, [1.0, 0.5])
    p_shifted = relrec.sampled_softmax_prob(2.0 + 100.0, [101.0, 100.5])
    assert abs(p - p_shifted) <= 1e-12


def test_generate_corpus_is_deterministic_and_unit_norm():
    a = small_corpus()
    b = small_corpus()
    assert a.n_videos() == 120
    assert len(a.pairs) == 1500
    assert [(p.trigger, p.candidate) for p in a.pairs] == [
        (p.trigger, p.candidate) for p in b.pairs
    ]
    for v in a.videos[:10]:
        assert abs(math.hypot(*v.text_emb) - 1.0) < 1e-9
        assert v.topics
    assert a.videos[3].text_emb == b.videos[3].text_emb


def test_split_partitions_pairs():
    ds = small_corpus()
    train, held = relrec.split_dataset(ds, 0.2, 7)
    assert len(held.pairs) == 300
    assert len(train.pairs) == 1200
    assert train.n_videos() == ds.n_videos()


def test_train_index_recommend_round_trip(tmp_path):
    ds = small_corpus()
    model = relrec.ModelConfig()
    model.d_id = model.d_out = 8
    model.d_text, model.d_visual = ds.d_text(), ds.d_visual()
    tc = relrec.TrainConfig()
    tc.epochs = 2
    tc.batch_size = 64
    tc.seed = 3

    params, report = relrec.train(ds, model, tc)
    assert params.all_finite()
    assert len(report.epochs) == 2
    assert all(math.isfinite(e.mean_weighted_loss) for e in report.epochs)

    params2, report2 = relrec.train(ds, model, tc)
    assert report.epochs[0].mean_weighted_loss == report2.epochs[0].mean_weighted_loss

    index = relrec.build_index(params, model, ds)
    assert index.size() == ds.n_videos()
    hits = relrec.top_k(index, 0, 5)
    assert len(hits) == 5
    assert all(hits[i].score >= hits[i + 1].score for i in range(4))
    assert all(h.id != 0 for h in hits)

    # Exact retrieval agrees with a brute-force scan of the index rows.
    trig = index.row(0)
    scores = {
        vid: sum(x * y for x, y in zip(trig, index.row(vid)))
        for vid in range(index.size())
        if vid != 0
    }
    best = max(scores, key=lambda vid: (scores[vid], -vid))
    assert hits[0].id == best
    assert hits[0].score == scores[best]

    ck = tmp_path / "model.ckpt"
    relrec.checkpoint_save(params, model, str(ck))
    loaded_params, loaded_model = relrec.checkpoint_load(str(ck))
    assert relrec.embed(loaded_params, loaded_model, ds.videos[5]) == relrec.embed(
        params, model, ds.videos[5]
    )

    ix_path = tmp_path / "emb.idx"
    relrec.dump_index(index, str(ix_path))
    reloaded = relrec.load_index(str(ix_path))
    assert reloaded.fingerprint == index.fingerprint
    assert reloaded.row(7) == index.row(7)


def test_metrics_fields_are_rates():
    ds = small_corpus()
    train, held = relrec.split_dataset(ds, 0.2, 7)
    model = relrec.ModelConfig()
    model.d_id = model.d_out = 8
    tc = relrec.TrainConfig()
    tc.batch_size = 64
    params, _ = relrec.train(train, model, tc)
    index = relrec.build_index(params, model, ds)
    freq = relrec.build_frequency_table(train.pairs, ds.n_videos())
    assert freq.total == len(train.pairs)

    m = relrec.compute_metrics(index, ds, held.pairs, freq, relrec.EvalConfig())
    assert m.k == 10
    for value in (m.recall_at_k, m.topic_match_rate, m.popular_share):
        assert 0.0 <= value <= 1.0
    assert 0.0 <= m.unpopular.topic_match_rate <= 1.0


def test_dataset_files_round_trip(tmp_path):
    ds = small_corpus(n_videos=40, n_topics=3, n_pairs=200)
    vp, pp = tmp_path / "v.jsonl", tmp_path / "p.jsonl"
    relrec.save_dataset(ds, str(vp), str(pp))
    back = relrec.load_dataset(str(vp), str(pp))
    assert back.n_videos() == 40
    assert back.videos[11].text_emb == ds.videos[11].text_emb
    assert (back.pairs[50].trigger, back.pairs[50].candidate) == (
        ds.pairs[50].trigger,
        ds.pairs[50].candidate,
    )


def test_errors_surface_as_python_exceptions(tmp_path):
    assert issubclass(relrec.ValidationError, ValueError)
    assert issubclass(relrec.IoError, IOError)

    bad = relrec.SynthConfig()
    bad.n_videos = 1
    with pytest.raises(ValueError):
        relrec.generate_corpus(bad)
    with pytest.raises(IOError):
        relrec.load_dataset(str(tmp_path / "absent_v"), str(tmp_path / "absent_p"))


def test_ablation_surface():
    rows = relrec.default_ablation_rows()
    assert len(rows) == 11
    assert rows[0].name == "baseline_cf"
    assert rows[-1].name == "mtl_multimodal_opc"
    assert rows[-1].opc_enabled

    preset = relrec.reference_preset()
    assert preset.synth.n_videos == 2000
    assert preset.model.d_id == 16
    assert preset.eval.k == 10
