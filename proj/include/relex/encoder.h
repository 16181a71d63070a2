#pragma once

#include <vector>

#include "relex/graph.h"
#include "relex/params.h"

namespace relex {

struct Sentence;
struct Vocabulary;

struct EmbedTables {
  Parameter* word = nullptr;   // |V_w| x n_w
  Parameter* pos = nullptr;    // |V_p| x n_p
  Parameter* dep = nullptr;    // |V_d| x n_d
  Parameter* label = nullptr;  // |tags| x n_e
};

// One direction of the sequential LSTM (input/forget/output gates and the
// candidate update, each with input and recurrent weights and a bias).
struct LstmGates {
  Parameter *Wi, *Wf, *Wo, *Wu;
  Parameter *Ui, *Uf, *Uo, *Uu;
  Parameter *bi, *bf, *bo, *bu;
};

struct SeqLstmParams {
  LstmGates fwd, bwd;
  int input_dim = 0;
  int hidden = 0;
};

EmbedTables make_embed_tables(ParamStore& store, const Vocabulary& vocab, int word_dim,
                              int pos_dim, int dep_dim, int label_dim, std::mt19937& rng);
LstmGates make_lstm_gates(ParamStore& store, const std::string& prefix, int input_dim,
                          int hidden, unsigned group, double forget_bias,
                          std::mt19937& rng);
SeqLstmParams make_seq_lstm(ParamStore& store, int input_dim, int hidden,
                            double forget_bias, std::mt19937& rng);

// x_t = [v_word; v_pos], with embedding dropout in training mode.
int embed_token(Graph& g, const EmbedTables& tables, int word_id, int pos_id,
                double dropout_p);

struct LstmState {
  int h = -1;
  int c = -1;
};

LstmState lstm_step(Graph& g, const LstmGates& p, int x, const LstmState& prev);

// Bidirectional pass over the embedded tokens; s_t is the concatenation of
// the two directions' hidden states at t.
std::vector<int> sequence_layer(Graph& g, const SeqLstmParams& p,
                                const std::vector<int>& inputs);

}  // namespace relex
