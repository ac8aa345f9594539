"""Multi-sentence compression over word graphs.

Clusters of similar POS-tagged sentences are modeled as a directed word
graph with cohesion-weighted arcs; compressions are begin-to-end paths.
The exact solver minimizes path weight minus a bonus for each distinct
keyword label on the path; a k-shortest-paths baseline and ROUGE metrics
round out the toolkit.
"""

from .baseline import PathCandidate, baseline_compress, k_shortest_paths
from .corpus import (Cluster, ClusterStats, ParseError, Sentence,
                     StopwordList, Token, cluster_stats, corpus_stats,
                     load_stopwords, parse_cluster, parse_clusters)
from .evaluation import (MetricScore, RougeReport, compression_ratio,
                         rouge_n, rouge_su4)
from .ilp import (CompressionModel, ModelError, Solution, SolverConfig,
                  SolverTimeout, build_model, enumerate_nbest, export_lp,
                  solve_exact, verify_solution)
from .keywords import (KeywordSet, LabelAssignment, assign_labels,
                       extract_keywords, keyword_coverage, lda_keywords,
                       lsi_keywords, textrank_keywords)
from .rerank import (BonusKind, BonusPolicy, PosLm, keyword_bonus,
                     poslm_load, poslm_rerank, poslm_save, poslm_train,
                     select_best)
from .wordgraph import Arc, Vertex, WordGraph, build_graph, compute_weights, to_dot

__version__ = "0.1.0"

__all__ = [
    "Arc", "BonusKind", "BonusPolicy", "Cluster", "ClusterStats",
    "CompressionModel", "KeywordSet", "LabelAssignment", "MetricScore",
    "ModelError", "ParseError", "PathCandidate", "PosLm", "RougeReport",
    "Sentence", "Solution", "SolverConfig", "SolverTimeout", "StopwordList",
    "Token", "Vertex", "WordGraph", "assign_labels", "baseline_compress",
    "build_graph", "build_model", "cluster_stats", "compression_ratio",
    "compute_weights", "corpus_stats", "enumerate_nbest", "export_lp",
    "extract_keywords", "k_shortest_paths", "keyword_bonus",
    "keyword_coverage", "lda_keywords", "load_stopwords", "lsi_keywords",
    "parse_cluster", "parse_clusters", "poslm_load", "poslm_rerank",
    "poslm_save", "poslm_train", "rouge_n", "rouge_su4", "select_best",
    "solve_exact", "textrank_keywords", "to_dot", "verify_solution",
]
