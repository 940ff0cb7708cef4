# SPDX-License-Identifier: Apache-2.0
"""Related-video retrieval toolkit.

Synthetic co-engagement corpora, a shared-weight two-tower model trained
with in-batch sampled softmax plus a semantic auxiliary loss, optional
inverse-propensity example weighting, exact top-k retrieval, and the
packaged ablation sweep.

Typical round trip::

    import relrec

    cfg = relrec.SynthConfig()
    cfg.n_videos, cfg.n_topics, cfg.n_pairs = 200, 5, 2000
    ds = relrec.generate_corpus(cfg)

    model = relrec.ModelConfig()
    model.d_id = model.d_out = 8
    model.d_text, model.d_visual = ds.d_text(), ds.d_visual()
    params, report = relrec.train(ds, model, relrec.TrainConfig())

    index = relrec.build_index(params, model, ds)
    for hit in relrec.top_k(index, trigger_id=0, k=5):
        print(hit.id, hit.score)

When a model uses text or visual content (``use_text``/``use_visual``),
set ``d_text``/``d_visual`` on the :class:`ModelConfig` from the dataset
before training, as above.
"""

from relrec._core import (
    Activation,
    AblationReport,
    AblationRow,
    AblationRowResult,
    BucketMetrics,
    Dataset,
    EmbeddingIndex,
    EpochStats,
    EvalConfig,
    FrequencyTable,
    InteractionPair,
    IoError,
    LossWeights,
    MetricsReport,
    ModelConfig,
    ReferencePreset,
    ScoredVideo,
    SemanticLabelConfig,
    SynthConfig,
    TowerParams,
    TrainConfig,
    TrainReport,
    ValidationError,
    VideoRecord,
    build_frequency_table,
    build_index,
    checkpoint_load,
    checkpoint_save,
    compute_metrics,
    cosine_similarity,
    default_ablation_rows,
    dump_index,
    embed,
    format_ablation_table,
    generate_corpus,
    init_params,
    load_dataset,
    load_index,
    opc_weight,
    pair_losses,
    recall_at_k,
    reference_preset,
    run_ablation,
    sampled_softmax_prob,
    save_dataset,
    semantic_indicator,
    split_dataset,
    top_k,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Activation",
    "AblationReport",
    "AblationRow",
    "AblationRowResult",
    "BucketMetrics",
    "Dataset",
    "EmbeddingIndex",
    "EpochStats",
    "EvalConfig",
    "FrequencyTable",
    "InteractionPair",
    "IoError",
    "LossWeights",
    "MetricsReport",
    "ModelConfig",
    "ReferencePreset",
    "ScoredVideo",
    "SemanticLabelConfig",
    "SynthConfig",
    "TowerParams",
    "TrainConfig",
    "TrainReport",
    "ValidationError",
    "VideoRecord",
    "build_frequency_table",
    "build_index",
    "checkpoint_load",
    "checkpoint_save",
    "compute_metrics",
    "cosine_similarity",
    "default_ablation_rows",
    "dump_index",
    "embed",
    "format_ablation_table",
    "generate_corpus",
    "init_params",
    "load_dataset",
    "load_index",
    "opc_weight",
    "pair_losses",
    "recall_at_k",
    "reference_preset",
    "run_ablation",
    "sampled_softmax_prob",
    "save_dataset",
    "semantic_indicator",
    "split_dataset",
    "top_k",
    "train",
]
