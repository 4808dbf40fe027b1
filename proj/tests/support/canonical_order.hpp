/*
   Copyright 2026 The affectrf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Feature order transcribed by hand from the layout table in docs/FORMAT.md.
// Kept separate from the library's own name table on purpose.

namespace affect::testing {

inline const char* const kHandTranscribedOrder[48] = {
    "gaze_0_x", "gaze_0_y", "gaze_0_z", "gaze_1_x", "gaze_1_y", "gaze_1_z", "gaze_angle_x", "gaze_angle_y",
    "pose_Tx",  "pose_Ty",  "pose_Tz",  "pose_Rx",  "pose_Ry",  "pose_Rz",  "AU01_r",       "AU02_r",
    "AU04_r",   "AU05_r",   "AU06_r",   "AU07_r",   "AU09_r",   "AU10_r",   "AU12_r",       "AU14_r",
    "AU15_r",   "AU17_r",   "AU20_r",   "AU23_r",   "AU25_r",   "AU26_r",   "AU45_r",       "AU01_c",
    "AU02_c",   "AU04_c",   "AU05_c",   "AU06_c",   "AU07_c",   "AU09_c",   "AU10_c",       "AU12_c",
    "AU14_c",   "AU15_c",   "AU17_c",   "AU20_c",   "AU23_c",   "AU25_c",   "AU26_c",       "AU45_c"};

}  // namespace affect::testing
