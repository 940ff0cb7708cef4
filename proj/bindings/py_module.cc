// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the retrieval core. The surface mirrors the C++ API:
// config structs are mutable attribute bags, datasets and indexes are thin
// handles, and the operation functions match their C++ signatures.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relrec/ablation.h"
#include "relrec/corpus.h"
#include "relrec/eval.h"
#include "relrec/model.h"
#include "relrec/objective.h"
#include "relrec/retrieval.h"
#include "relrec/syngen.h"
#include "relrec/trainer.h"

namespace py = pybind11;
using namespace relrec;

namespace {

std::vector<double> index_row(const EmbeddingIndex& ix, int64_t id) {
  if (id < 0 || id >= ix.size()) throw ValidationError("index row out of range");
  const double* r = ix.embeddings.row(static_cast<size_t>(id));
  return {r, r + ix.embeddings.cols};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Related-video retrieval core: synthetic corpora, two-tower "
            "training, exact top-k retrieval, and evaluation.";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  // Corpus -------------------------------------------------------------
  py::class_<VideoRecord>(m, "VideoRecord")
      .def(py::init<>())
      .def_readwrite("id", &VideoRecord::id)
      .def_readwrite("topics", &VideoRecord::topics)
      .def_readwrite("text_emb", &VideoRecord::text_emb)
      .def_readwrite("visual_emb", &VideoRecord::visual_emb);

  py::class_<InteractionPair>(m, "InteractionPair")
      .def(py::init<>())
      .def(py::init([](int64_t t, int64_t c) {
             InteractionPair p;
             p.trigger = t;
             p.candidate = c;
             return p;
           }),
           py::arg("trigger"), py::arg("candidate"))
      .def_readwrite("trigger", &InteractionPair::trigger)
      .def_readwrite("candidate", &InteractionPair::candidate);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("videos", &Dataset::videos)
      .def_readwrite("pairs", &Dataset::pairs)
      .def("n_videos", &Dataset::n_videos)
      .def("d_text", &Dataset::d_text)
      .def("d_visual", &Dataset::d_visual);

  py::class_<FrequencyTable>(m, "FrequencyTable")
      .def_readonly("counts", &FrequencyTable::counts)
      .def_readonly("total", &FrequencyTable::total)
      .def("count", &FrequencyTable::count, py::arg("id"));

  m.def("load_dataset", &load_dataset, py::arg("videos_path"), py::arg("pairs_path"));
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("videos_path"),
        py::arg("pairs_path"));
  m.def("split_dataset", &split_dataset, py::arg("dataset"), py::arg("holdout_fraction"),
        py::arg("seed"));
  m.def("build_frequency_table", &build_frequency_table, py::arg("pairs"),
        py::arg("n_videos") = 0);

  // Synthetic corpus ---------------------------------------------------
  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("n_videos", &SynthConfig::n_videos)
      .def_readwrite("n_topics", &SynthConfig::n_topics)
      .def_readwrite("d_text", &SynthConfig::d_text)
      .def_readwrite("d_visual", &SynthConfig::d_visual)
      .def_readwrite("zipf_exponent", &SynthConfig::zipf_exponent)
      .def_readwrite("cross_topic_noise", &SynthConfig::cross_topic_noise)
      .def_readwrite("content_noise", &SynthConfig::content_noise)
      .def_readwrite("n_pairs", &SynthConfig::n_pairs)
      .def_readwrite("seed", &SynthConfig::seed);

  m.def("generate_corpus", &generate_corpus, py::arg("config"));

  // Model --------------------------------------------------------------
  py::enum_<Activation>(m, "Activation")
      .value("TANH", Activation::kTanh)
      .value("IDENTITY", Activation::kIdentity);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("d_id", &ModelConfig::d_id)
      .def_readwrite("d_out", &ModelConfig::d_out)
      .def_readwrite("use_text", &ModelConfig::use_text)
      .def_readwrite("use_visual", &ModelConfig::use_visual)
      .def_readwrite("init_scale", &ModelConfig::init_scale)
      .def_readwrite("d_text", &ModelConfig::d_text)
      .def_readwrite("d_visual", &ModelConfig::d_visual)
      .def_readwrite("activation", &ModelConfig::activation)
      .def("d_in", &ModelConfig::d_in);

  py::class_<TowerParams>(m, "TowerParams")
      .def_property_readonly("n_videos",
                             [](const TowerParams& p) { return p.id_table.rows; })
      .def("all_finite", &TowerParams::all_finite);

  m.def("init_params", &init_params, py::arg("config"), py::arg("n_videos"), py::arg("seed"));
  m.def("embed", &embed, py::arg("params"), py::arg("config"), py::arg("video"));
  m.def("checkpoint_save", &checkpoint_save, py::arg("params"), py::arg("config"),
        py::arg("path"));
  m.def("checkpoint_load", &checkpoint_load, py::arg("path"));

  // Objective ----------------------------------------------------------
  py::class_<LossWeights>(m, "LossWeights")
      .def(py::init<>())
      .def_readwrite("w_co", &LossWeights::w_co)
      .def_readwrite("w_sem", &LossWeights::w_sem);

  py::class_<SemanticLabelConfig>(m, "SemanticLabelConfig")
      .def(py::init<>())
      .def_readwrite("cosine_threshold", &SemanticLabelConfig::cosine_threshold);

  m.def("cosine_similarity", &cosine_similarity, py::arg("a"), py::arg("b"));
  m.def("semantic_indicator", &semantic_indicator, py::arg("trigger"), py::arg("candidate"),
        py::arg("config"));
  m.def("sampled_softmax_prob", &sampled_softmax_prob, py::arg("pos_logit"),
        py::arg("neg_logits"));
  m.def("pair_losses", &pair_losses, py::arg("prob"), py::arg("indicator"));
  m.def("opc_weight", &opc_weight, py::arg("freq"));

  // Training -----------------------------------------------------------
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("adam_beta1", &TrainConfig::adam_beta1)
      .def_readwrite("adam_beta2", &TrainConfig::adam_beta2)
      .def_readwrite("adam_epsilon", &TrainConfig::adam_epsilon)
      .def_readwrite("loss_weights", &TrainConfig::loss_weights)
      .def_readwrite("sem_config", &TrainConfig::sem_config)
      .def_readwrite("opc_enabled", &TrainConfig::opc_enabled)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<EpochStats>(m, "EpochStats")
      .def_readonly("epoch", &EpochStats::epoch)
      .def_readonly("mean_weighted_loss", &EpochStats::mean_weighted_loss)
      .def_readonly("mean_l_co", &EpochStats::mean_l_co)
      .def_readonly("mean_l_sem", &EpochStats::mean_l_sem)
      .def_readonly("semantic_positive_fraction", &EpochStats::semantic_positive_fraction)
      .def_readonly("wall_clock_sec", &EpochStats::wall_clock_sec);

  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("epochs", &TrainReport::epochs);

  m.def("train", &train, py::arg("train_set"), py::arg("model_config"),
        py::arg("train_config"));

  // Retrieval ----------------------------------------------------------
  py::class_<EmbeddingIndex>(m, "EmbeddingIndex")
      .def_property_readonly("fingerprint",
                             [](const EmbeddingIndex& ix) { return ix.fingerprint; })
      .def_property_readonly("dim",
                             [](const EmbeddingIndex& ix) { return ix.embeddings.cols; })
      .def("size", &EmbeddingIndex::size)
      .def("row", &index_row, py::arg("id"));

  py::class_<ScoredVideo>(m, "ScoredVideo")
      .def_readonly("id", &ScoredVideo::id)
      .def_readonly("score", &ScoredVideo::score);

  m.def("build_index",
        [](const TowerParams& p, const ModelConfig& c, const Dataset& ds) {
          return build_index(p, c, ds.videos);
        },
        py::arg("params"), py::arg("config"), py::arg("dataset"));
  m.def("top_k", &top_k, py::arg("index"), py::arg("trigger_id"), py::arg("k"));
  m.def("dump_index", &dump_index, py::arg("index"), py::arg("path"));
  m.def("load_index", &load_index, py::arg("path"));

  // Evaluation ---------------------------------------------------------
  py::class_<EvalConfig>(m, "EvalConfig")
      .def(py::init<>())
      .def_readwrite("k", &EvalConfig::k)
      .def_readwrite("popular_top_fraction", &EvalConfig::popular_top_fraction)
      .def_readwrite("unpopular_bottom_fraction", &EvalConfig::unpopular_bottom_fraction);

  py::class_<BucketMetrics>(m, "BucketMetrics")
      .def_readonly("recall_at_k", &BucketMetrics::recall_at_k)
      .def_readonly("topic_match_rate", &BucketMetrics::topic_match_rate);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("k", &MetricsReport::k)
      .def_readonly("recall_at_k", &MetricsReport::recall_at_k)
      .def_readonly("topic_match_rate", &MetricsReport::topic_match_rate)
      .def_readonly("mean_topic_overlap", &MetricsReport::mean_topic_overlap)
      .def_readonly("popular_share", &MetricsReport::popular_share)
      .def_readonly("popular", &MetricsReport::popular)
      .def_readonly("unpopular", &MetricsReport::unpopular)
      .def_readonly("all", &MetricsReport::all);

  m.def("recall_at_k", &recall_at_k, py::arg("index"), py::arg("eval_pairs"), py::arg("k"));
  m.def("compute_metrics",
        [](const EmbeddingIndex& ix, const Dataset& ds,
           const std::vector<InteractionPair>& eval_pairs, const FrequencyTable& freq,
           const EvalConfig& cfg) {
          return compute_metrics(ix, ds.videos, eval_pairs, freq, cfg);
        },
        py::arg("index"), py::arg("dataset"), py::arg("eval_pairs"), py::arg("freq"),
        py::arg("config"));

  // Ablation -----------------------------------------------------------
  py::class_<AblationRow>(m, "AblationRow")
      .def_readonly("name", &AblationRow::name)
      .def_readonly("ratio", &AblationRow::ratio)
      .def_readonly("trained", &AblationRow::trained)
      .def_readonly("weights", &AblationRow::weights)
      .def_readonly("use_text", &AblationRow::use_text)
      .def_readonly("use_visual", &AblationRow::use_visual)
      .def_readonly("opc_enabled", &AblationRow::opc_enabled);

  py::class_<AblationRowResult>(m, "AblationRowResult")
      .def_readonly("row", &AblationRowResult::row)
      .def_readonly("metrics", &AblationRowResult::metrics)
      .def_readonly("wall_clock_sec", &AblationRowResult::wall_clock_sec);

  py::class_<AblationReport>(m, "AblationReport")
      .def_readonly("rows", &AblationReport::rows)
      .def_readonly("n_videos", &AblationReport::n_videos)
      .def_readonly("n_train_pairs", &AblationReport::n_train_pairs)
      .def_readonly("n_eval_pairs", &AblationReport::n_eval_pairs);

  py::class_<ReferencePreset>(m, "ReferencePreset")
      .def_readonly("synth", &ReferencePreset::synth)
      .def_readonly("model", &ReferencePreset::model)
      .def_readonly("train", &ReferencePreset::train)
      .def_readonly("eval", &ReferencePreset::eval)
      .def_readonly("holdout_fraction", &ReferencePreset::holdout_fraction);

  m.def("default_ablation_rows", &default_ablation_rows);
  m.def("reference_preset", &reference_preset);
  m.def("run_ablation", &run_ablation, py::arg("dataset"), py::arg("rows"),
        py::arg("base_model"), py::arg("base_train"), py::arg("eval_config"),
        py::arg("holdout_fraction"), py::arg("split_seed"));
  m.def("format_ablation_table", &format_ablation_table, py::arg("report"));
}
