/*
 * Copyright 2026 The Glimmer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Bundled scenario texts, byte-identical to the files under scenarios/.

#include "core/harness.hpp"

namespace glimmer::sim {
namespace {

constexpr const char kHonest10[] = R"SCN(# Ten honest private contributors, two rounds, exact aggregation throughout.
[scenario]
name = honest_10
description = ten honest private clients aggregate bigram models over two rounds
seed = 42
rounds = 2
vocabulary = the quick brown fox jumps over lazy dog
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = the fox
transport = bus
capture_transcripts = true

[client 1]
corpus = the quick brown fox | the lazy dog
repeat = 3

[client 2]
corpus = the quick brown fox
repeat = 2

[client 3]
corpus = fox jumps over the lazy dog
repeat = 2

[client 4]
corpus = the lazy dog jumps
repeat = 3

[client 5]
corpus = quick brown fox jumps over
repeat = 2

[client 6]
corpus = the dog jumps over the fox
repeat = 2

[client 7]
corpus = lazy dog | the lazy fox
repeat = 4

[client 8]
corpus = the quick fox
repeat = 3

[client 9]
corpus = brown dog jumps | over the brown fox
repeat = 2

[client 10]
corpus = over the lazy dog
repeat = 3
)SCN";

constexpr const char kAlice538[] = R"SCN(# One attacker plants an illegal weight of 538 on her strongest bigram. The
# glimmer refuses to sign it, her raw fallback is rejected, and the published
# aggregate equals the honest-only sum.
[scenario]
name = alice_538
description = out-of-range weight attack is contained by validation and signing
seed = 538
rounds = 1
vocabulary = vote for carol donald trump the best
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = donald vote
transport = bus
capture_transcripts = true

[client 1]
corpus = donald trump | donald trump the best
repeat = 3
adversary = out_of_range
out_of_range_weight = 538

[client 2]
corpus = vote for carol | carol the best
repeat = 2

[client 3]
corpus = vote for carol
repeat = 3

[client 4]
corpus = the best vote for carol
repeat = 2
)SCN";

constexpr const char kTrendingTrump[] = R"SCN(# Most clients type "donald trump"; the aggregate ranks "trump" as the top
# successor of "donald" even though one client prefers "donald duck".
[scenario]
name = trending_trump
description = aggregate bigram statistics surface the trending next word
seed = 1913
rounds = 1
vocabulary = donald trump duck says hello president
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = donald
transport = bus
capture_transcripts = true

[client 1]
corpus = donald trump says hello | president donald trump
repeat = 3

[client 2]
corpus = donald trump | trump says hello
repeat = 2

[client 3]
corpus = donald trump president
repeat = 3

[client 4]
corpus = donald duck says hello | donald duck
repeat = 2

[client 5]
corpus = president donald trump says
repeat = 2
)SCN";

constexpr const char kDropout103[] = R"SCN(# Three of ten clients vanish before submitting. The blinding service reveals
# exactly their pads and the round still closes bit-exactly over the seven.
[scenario]
name = dropout_10_3
description = dropout repair closes the round exactly with seven of ten submitters
seed = 777
rounds = 1
vocabulary = the quick brown fox jumps over lazy dog
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = the
transport = bus
capture_transcripts = true

[client 1]
corpus = the quick brown fox | the lazy dog
repeat = 3

[client 2]
corpus = the quick brown fox
repeat = 2

[client 3]
corpus = fox jumps over the lazy dog
repeat = 2

[client 4]
corpus = the lazy dog jumps
repeat = 3

[client 5]
corpus = quick brown fox jumps over
repeat = 2

[client 6]
corpus = the dog jumps over the fox
repeat = 2

[client 7]
corpus = lazy dog | the lazy fox
repeat = 4

[client 8]
corpus = the quick fox
repeat = 3

[client 9]
corpus = brown dog jumps | over the brown fox
repeat = 2

[client 10]
corpus = over the lazy dog
repeat = 3

[dropouts]
round_1 = 3 7 9
)SCN";

constexpr const char kCorroborationGate[] = R"SCN(# The policy retrains the model from the private keyboard log inside the
# glimmer and rejects any vector that deviates. A fabricated in-range vector
# fails corroboration and never reaches the service.
[scenario]
name = corroboration_gate
description = fabricated in-range vectors fail in-enclave corroboration
seed = 4242
rounds = 1
vocabulary = alpha beta gamma delta
policy = corroboration
policy_lo = 0
policy_hi = 1000000
tolerance = 0
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = alpha
transport = bus
capture_transcripts = true

[client 1]
corpus = alpha beta gamma | gamma delta
repeat = 3

[client 2]
corpus = beta gamma delta alpha
repeat = 2

[client 3]
corpus = alpha beta | delta gamma beta
repeat = 2

[client 4]
corpus = alpha beta gamma delta
repeat = 2
adversary = fabricated_in_range
)SCN";

constexpr const char kReplayAttack[] = R"SCN(# A replayer submits its endorsed contribution twice in the same round and
# then resends a stale one next round. The service accepts exactly one copy.
[scenario]
name = replay_attack
description = duplicate and stale contributions are rejected by round state
seed = 99
rounds = 2
vocabulary = ping pong data sync echo
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = ping
transport = bus
capture_transcripts = true

[client 1]
corpus = ping pong ping | data sync echo
repeat = 3

[client 2]
corpus = data sync data | echo ping
repeat = 2

[client 3]
corpus = ping pong | pong data sync
repeat = 2
adversary = replay
)SCN";

constexpr const char kTamperedCode[] = R"SCN(# One client runs a glimmer binary with a single flipped byte. Its quote
# fails verification, the sealed signing key refuses to open for it, and it
# contributes nothing.
[scenario]
name = tampered_code
description = a one-byte code change voids attestation and sealing
seed = 1001
rounds = 1
vocabulary = safe code runs here only
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = safe
transport = bus
capture_transcripts = true

[client 1]
corpus = safe code runs here | only safe code
repeat = 3

[client 2]
corpus = code runs here only
repeat = 2

[client 3]
corpus = safe code | runs here
repeat = 2
adversary = tampered_code
)SCN";

constexpr const char kRemoteIot[] = R"SCN(# Three thin clients tunnel their pipeline through a shared remote glimmer
# host after attesting it; two run local glimmers. No private bytes travel
# before attestation, and outputs are byte-identical to local runs.
[scenario]
name = remote_iot
description = remote glimmer hosting for thin devices behind one attested hub
seed = 2024
rounds = 2
vocabulary = sensor reads warm cold node
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = sensor
transport = bus
capture_transcripts = true

[remote 1]
label = iot-hub

[client 1]
corpus = sensor reads warm | warm node
repeat = 3
glimmer = remote:1

[client 2]
corpus = sensor reads cold | cold node sensor
repeat = 2
glimmer = remote:1

[client 3]
corpus = node reads sensor
repeat = 2
glimmer = remote:1

[client 4]
corpus = sensor reads warm cold
repeat = 2

[client 5]
corpus = cold sensor | warm sensor node
repeat = 3
)SCN";

constexpr const char kBotGate[] = R"SCN(# The service ships a secret validator into each glimmer over an attested
# channel. It demands real typing activity; bots fail the hidden thresholds
# and are excluded before the round, learning only the one verdict bit.
[scenario]
name = bot_gate
description = confidential validation screens bots out of the round
seed = 31337
rounds = 1
vocabulary = hello world good morning friend
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = hello
transport = bus
capture_transcripts = true

[client 1]
corpus = hello world | good morning friend
repeat = 3

[client 2]
corpus = hello friend | good morning world
repeat = 2

[client 3]
corpus = good morning | hello world friend
repeat = 2

[client 4]
corpus = hello hello hello
repeat = 5

[client 5]
corpus = hello world hello world
repeat = 4

[confidential]
validator = (and (>= (signal typing_events) 20) (>= (count 0 -1) 3))
challenge_round = 1
signals_1 = typing_events:45
signals_2 = typing_events:52
signals_3 = typing_events:31
signals_4 = typing_events:2
signals_5 = typing_events:1
timestamps_1 = 1000 2000 3500 7000 9000
timestamps_2 = 1500 2500 4000 8000
timestamps_3 = 900 1800 2700 3600 4500
timestamps_4 = 5000
timestamps_5 =
)SCN";

constexpr const char kPublicMix[] = R"SCN(# Two clients opt out of blinding and contribute plaintext vectors alongside
# three blinded ones. The aggregate folds both kinds and stays exact; only
# the public vectors are ever visible on the wire.
[scenario]
name = public_mix
description = blinded and public contributions aggregate together exactly
seed = 515
rounds = 1
vocabulary = open data shared private safe
policy = range
policy_lo = 0
policy_hi = 1000000
normalization = joint
confidence_threshold = 128
deadline_ticks = 10
probe_words = data
transport = bus
capture_transcripts = true

[client 1]
corpus = open data shared | private safe data
repeat = 3

[client 2]
corpus = data shared open
repeat = 2

[client 3]
corpus = private data safe | safe open
repeat = 2

[client 4]
corpus = open data | data shared safe
repeat = 3
public_contribution = true

[client 5]
corpus = shared private data
repeat = 2
public_contribution = true
)SCN";

struct BuiltinScenario {
  const char* name;
  const char* text;
};

constexpr BuiltinScenario kBuiltins[] = {
    {"honest_10", kHonest10},
    {"alice_538", kAlice538},
    {"trending_trump", kTrendingTrump},
    {"dropout_10_3", kDropout103},
    {"corroboration_gate", kCorroborationGate},
    {"replay_attack", kReplayAttack},
    {"tampered_code", kTamperedCode},
    {"remote_iot", kRemoteIot},
    {"bot_gate", kBotGate},
    {"public_mix", kPublicMix},
};

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const BuiltinScenario& s : kBuiltins) names.push_back(s.name);
  return names;
}

const char* builtin_scenario_text(const std::string& name) {
  for (const BuiltinScenario& s : kBuiltins)
    if (name == s.name) return s.text;
  return nullptr;
}

}  // namespace glimmer::sim
