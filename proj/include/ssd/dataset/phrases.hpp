/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ssd::dataset {

struct Phrase {
  std::string_view phrase_id;
  std::string_view text;
  std::string_view romanization;
  std::string_view translation;
  int characters;
};

/// The 96 recorded phrases, read down the left column of the two-column
/// phrase sheet and then down the right. Several phrases appear twice on the
/// sheet and keep both slots.
inline constexpr std::array<Phrase, 96> kPhrases = {{
    {"P01", "布丁", "Bùdīng", "pudding", 2},
    {"P02", "麵包", "miànbāo", "bread", 2},
    {"P03", "大白菜", "dàbáicài", "Chinese cabbage", 3},
    {"P04", "螃蟹", "pángxiè", "Crab", 2},
    {"P05", "奶瓶", "nǎipíng", "baby bottle", 2},
    {"P06", "蓮蓬頭", "liánpengtóu", "shower head", 3},
    {"P07", "帽子", "màozi", "hat", 2},
    {"P08", "玉米", "yùmǐ", "corn", 2},
    {"P09", "捉迷藏", "zhuōmícáng", "hide and seek", 3},
    {"P10", "鳳梨", "fènglí", "pineapple", 2},
    {"P11", "衣服", "yīfú", "clothing", 2},
    {"P12", "吹風機", "chuīfēngjī", "hair dryer", 3},
    {"P13", "動物", "dòngwù", "animal", 2},
    {"P14", "蝴蝶", "húdié", "Butterfly", 2},
    {"P15", "看電視", "kàndiànshì", "watch TV", 3},
    {"P16", "太陽", "tàiyáng", "Sun", 2},
    {"P17", "枕頭", "zhěntou", "Pillow", 2},
    {"P18", "一條魚", "yītiáoyú", "a fish", 3},
    {"P19", "鈕扣", "niǔkòu", "button", 2},
    {"P20", "電腦", "diànnǎo", "computer", 2},
    {"P21", "喝奶昔", "hēnǎixī", "drink milkshake", 3},
    {"P22", "老虎", "lǎohǔ", "Tiger", 2},
    {"P23", "恐龍", "kǒnglóng", "Dinosaur", 2},
    {"P24", "養樂多", "yǎnglèduō", "Yakult", 3},
    {"P25", "果凍", "guǒdòng", "jelly", 2},
    {"P26", "烏龜", "wūguī", "tortoise", 2},
    {"P27", "去公園", "qùgōngyuán", "go to the park", 3},
    {"P28", "筷子", "kuàizi", "Chopsticks", 2},
    {"P29", "貝殼", "bèiké", "shell", 2},
    {"P30", "巧克力", "qiǎokèlì", "chocolate", 3},
    {"P31", "漢堡", "hànbǎo", "hamburger", 2},
    {"P32", "大海", "dàhǎi", "the sea", 2},
    {"P33", "救護車", "jiùhùchē", "ambulance", 3},
    {"P34", "膠帶", "jiāodài", "adhesive tape", 2},
    {"P35", "果醬", "guǒjiàng", "jam", 2},
    {"P36", "指甲刀", "zhǐjiǎdāo", "nail clippers", 3},
    {"P37", "鉛筆", "qiānbǐ", "pencil", 2},
    {"P38", "鋼琴", "gāngqín", "piano", 2},
    {"P39", "中秋節", "zhōngqiūjié", "Mid-Autumn Festival", 3},
    {"P40", "信封", "xìnfēng", "envelope", 2},
    {"P41", "點心", "diǎnxīn", "dessert", 2},
    {"P42", "口香糖", "kǒuxiāngtáng", "chewing gum", 3},
    {"P43", "站牌", "zhànpái", "stop sign", 2},
    {"P44", "蠟燭", "làzhú", "Candle", 2},
    {"P45", "擦桌子", "cāzhuōzi", "wipe the table", 3},
    {"P46", "抽屜", "chōutì", "drawer", 2},
    {"P47", "警察", "jǐngchá", "Policemen", 2},
    {"P48", "柳橙汁", "liǔchéngzhī", "orange juice", 3},
    {"P49", "閃電", "shǎndiàn", "lightning", 2},
    {"P50", "牙刷", "yáshuā", "toothbrush", 2},
    {"P51", "直升機", "zhíshēngjī", "helicopter", 3},
    {"P52", "日歷", "rìlì", "calendar", 2},
    {"P53", "超人", "chāorén", "superman", 2},
    {"P54", "大榕樹", "dàróngshù", "Large banyan", 3},
    {"P55", "走路", "zǒulù", "walk", 2},
    {"P56", "洗澡", "xǐzǎo", "bath", 2},
    {"P57", "水族箱", "shuǐzúxiāng", "aquarium", 3},
    {"P58", "草莓", "cǎoméi", "Strawberry", 2},
    {"P59", "洋蔥", "yángcōng", "onion", 2},
    {"P60", "上廁所", "shàngcèsuǒ", "To the restroom", 3},
    {"P61", "掃把", "sàobǎ", "broom", 2},
    {"P62", "垃圾", "lèsè", "Rubbish", 2},
    {"P63", "去散步", "qùsànbù", "go for a walk", 3},
    {"P64", "衣服", "yīfú", "clothing", 2},
    {"P65", "果醬", "guǒjiàng", "jam", 2},
    {"P66", "指甲刀", "zhǐjiǎdāo", "nail clippers", 3},
    {"P67", "筷子", "kuàizi", "Chopsticks", 2},
    {"P68", "烏龜", "wūguī", "tortoise", 2},
    {"P69", "去公園", "qùgōngyuán", "go to the park", 3},
    {"P70", "杜鵑花", "dùjuānhuā", "Rhododendron", 3},
    {"P71", "選擇", "xuǎnzé", "choose", 2},
    {"P72", "缺點", "quēdiǎn", "shortcoming", 2},
    {"P73", "太陽", "tàiyáng", "Sun", 2},
    {"P74", "大海", "dàhǎi", "the sea", 2},
    {"P75", "喝奶昔", "hēnǎixī", "drink milkshake", 3},
    {"P76", "草莓", "cǎoméi", "Strawberry", 2},
    {"P77", "貝殼", "bèiké", "shell", 2},
    {"P78", "水族箱", "shuǐzúxiāng", "aquarium", 3},
    {"P79", "帽子", "màozi", "hat", 2},
    {"P80", "麵包", "miànbāo", "bread", 2},
    {"P81", "一條魚", "yītiáoyú", "a fish", 3},
    {"P82", "鈕扣", "niǔkòu", "button", 2},
    {"P83", "枕頭", "zhěntou", "Pillow", 2},
    {"P84", "中秋節", "zhōngqiūjié", "Mid-Autumn Festival", 3},
    {"P85", "漢堡", "hànbǎo", "hamburger", 2},
    {"P86", "電腦", "diànnǎo", "computer", 2},
    {"P87", "看電視", "kàndiànshì", "watch TV", 3},
    {"P88", "信封", "xìnfēng", "envelope", 2},
    {"P89", "鋼琴", "gāngqín", "piano", 2},
    {"P90", "吃點心", "chīdiǎnxīn", "eat dessert", 3},
    {"P91", "螃蟹", "pángxiè", "Crab", 2},
    {"P92", "果醬", "guǒjiàng", "jam", 2},
    {"P93", "口香糖", "kǒuxiāngtáng", "chewing gum", 3},
    {"P94", "鳳梨", "fènglí", "pineapple", 2},
    {"P95", "奶瓶", "nǎipíng", "baby bottle", 2},
    {"P96", "蓮蓬頭", "liánpengtóu", "shower head", 3},
}};

inline const Phrase* find_phrase(std::string_view phrase_id) {
  for (const auto& p : kPhrases) {
    if (p.phrase_id == phrase_id) return &p;
  }
  return nullptr;
}

}  // namespace ssd::dataset
