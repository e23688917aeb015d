#pragma once

#include <array>
#include <string_view>
#include <utility>

// Seed texts for the bundled reference language-ID profiles. Parallel
// topics across languages keep the profiles comparable.
namespace corpus_forge::langid::bundled {

inline constexpr std::string_view kMacedonian =
    "Македонија е земја во југоисточна Европа, сместена во централниот дел на Балканскиот Полуостров. "
    "Главен град е Скопје, кое е и најголемиот град во државата. Охридското Езеро е едно од најстарите "
    "и најдлабоките езера во Европа и е заштитено од УНЕСКО. Македонскиот јазик припаѓа на "
    "јужнословенската група јазици и се пишува со кирилско писмо. Азбуката има триесет и една буква, "
    "меѓу кои се ѓ, ќ, ѕ, љ, њ, џ и ј. Во текот на летото многу туристи ги посетуваат Охрид, Струга и "
    "Дојран. Климата е умерено континентална, со топли и суви лета и студени зими. Земјоделството е "
    "важна гранка на стопанството, а особено се познати тутунот, виното и зеленчукот. Децата одат на "
    "училиште од шестгодишна возраст, а образованието е задолжително до крајот на средното училиште. "
    "Во градовите има многу паркови, пазари и кафулиња каде што луѓето се дружат. Македонската кујна е "
    "богата со јадења како тавче гравче, ајвар, пастрмајлија и баклава. Секоја година се одржуваат "
    "фестивали на музика, театар и филм. Граѓаните можат да се обратат до општината за секакви прашања "
    "поврзани со документи и дозволи. Владата донесе нова одлука за поддршка на младите претприемачи и "
    "малите бизниси. Професорот објасни дека истражувањето ќе трае три години и ќе опфати повеќе од "
    "илјада учесници. Ако сакате да дознаете повеќе, прочитајте ја целата статија на нашата веб-страница. "
    "Во неделата ќе врне дожд, а температурите ќе бидат пониски од вообичаеното. Библиотеката работи "
    "секој ден освен во недела, од осум часот наутро до осум часот навечер. Тој рече дека нема да дојде, "
    "бидејќи мора да ја заврши работата до петок. Таа е многу задоволна од резултатите што ги постигна "
    "нејзиниот тим оваа сезона. Според последниот попис, во земјата живеат околу два милиони жители. "
    "Учениците и наставниците се подготвуваат за новата учебна година што започнува во септември.";

inline constexpr std::string_view kSerbian =
    "Србија је земља у југоисточној Европи, смештена на раскрсници путева између средње Европе и "
    "Балкана. Главни град је Београд, који лежи на ушћу Саве у Дунав. Српски језик се пише ћирилицом и "
    "латиницом, а азбука има тридесет слова, међу којима су ђ, ћ, љ, њ, џ и ј. Током лета многи туристи "
    "посећују Нови Сад, Ниш и Златибор. Клима је умереноконтинентална, са топлим летима и хладним "
    "зимама. Пољопривреда је важна грана привреде, а познати су кукуруз, пшеница, шљиве и малине. Деца "
    "полазе у школу са шест или седам година, а основно образовање је обавезно. У градовима има много "
    "паркова, пијаца и кафића где се људи окупљају. Српска кухиња је позната по јелима као што су "
    "ћевапчићи, пљескавица, сарма и гибаница. Сваке године одржавају се фестивали музике, позоришта и "
    "филма. Грађани могу да се обрате општини за сва питања у вези са документима и дозволама. Влада је "
    "донела нову одлуку о подршци младим предузетницима и малим предузећима. Професор је објаснио да ће "
    "истраживање трајати три године и да ће обухватити више од хиљаду учесника. Ако желите да сазнате "
    "више, прочитајте цео чланак на нашој интернет страници. У недељу ће падати киша, а температуре ће "
    "бити ниже од уобичајених. Библиотека ради сваког дана осим недеље, од осам часова ујутру до осам "
    "часова увече. Он је рекао да неће доћи јер мора да заврши посао до петка. Она је веома задовољна "
    "резултатима које је њен тим постигао ове сезоне. Према последњем попису, у земљи живи око шест "
    "милиона становника. Ученици и наставници се припремају за нову школску годину која почиње у "
    "септембру.";

inline constexpr std::string_view kBulgarian =
    "България е държава в Югоизточна Европа, разположена в източната част на Балканския полуостров. "
    "Столицата е София, която е и най-големият град в страната. Българският език принадлежи към "
    "южнославянската група и се пише на кирилица. Азбуката има тридесет букви, сред които са щ, ъ, ь, ю "
    "и я. През лятото много туристи посещават Черноморието, Пловдив и Велико Търново. Климатът е "
    "умереноконтинентален, с топло лято и студена зима. Селското стопанство е важен отрасъл, а особено "
    "известни са розовото масло, виното и киселото мляко. Децата тръгват на училище на седемгодишна "
    "възраст, а образованието е задължително до шестнадесет години. В градовете има много паркове, "
    "пазари и кафенета, където хората се срещат. Българската кухня е богата с ястия като баница, шопска "
    "салата, таратор и кебапчета. Всяка година се провеждат фестивали на музиката, театъра и киното. "
    "Гражданите могат да се обърнат към общината по всякакви въпроси, свързани с документи и "
    "разрешения. Правителството взе ново решение за подкрепа на младите предприемачи и малкия бизнес. "
    "Професорът обясни, че изследването ще продължи три години и ще обхване повече от хиляда участници. "
    "Ако искате да научите повече, прочетете цялата статия на нашия уебсайт. В неделя ще вали дъжд, а "
    "температурите ще бъдат по-ниски от обичайното. Библиотеката работи всеки ден без неделя, от осем "
    "часа сутринта до осем часа вечерта. Той каза, че няма да дойде, защото трябва да завърши работата "
    "до петък. Тя е много доволна от резултатите, които постигна нейният отбор този сезон. Според "
    "последното преброяване в страната живеят около шест милиона и половина души. Учениците и "
    "учителите се подготвят за новата учебна година, която започва през септември.";

inline constexpr std::string_view kRussian =
    "Россия является крупнейшей страной мира по площади и расположена в Восточной Европе и Северной "
    "Азии. Столица страны Москва, самый большой город с населением более двенадцати миллионов человек. "
    "Русский язык относится к восточнославянской группе и пишется на кириллице. В алфавите тридцать три "
    "буквы, среди которых есть ы, э, ъ, ё, щ и я. Летом многие туристы посещают Санкт-Петербург, Казань "
    "и побережье Чёрного моря. Климат в большей части страны умеренно континентальный, с тёплым летом и "
    "холодной снежной зимой. Сельское хозяйство остаётся важной отраслью экономики, особенно выращивание "
    "пшеницы и подсолнечника. Дети идут в школу в возрасте шести или семи лет, а основное образование "
    "является обязательным. В городах много парков, рынков и кафе, где люди встречаются с друзьями. "
    "Русская кухня известна такими блюдами, как борщ, пельмени, блины и щи. Каждый год проводятся "
    "фестивали музыки, театра и кино. Граждане могут обратиться в администрацию по любым вопросам, "
    "связанным с документами и разрешениями. Правительство приняло новое решение о поддержке молодых "
    "предпринимателей и малого бизнеса. Профессор объяснил, что исследование продлится три года и "
    "охватит более тысячи участников. Если вы хотите узнать больше, прочитайте всю статью на нашем "
    "сайте. В воскресенье ожидается дождь, а температура будет ниже обычной. Библиотека работает каждый "
    "день, кроме воскресенья, с восьми часов утра до восьми часов вечера. Он сказал, что не придёт, "
    "потому что должен закончить работу до пятницы. Она очень довольна результатами, которых её "
    "команда добилась в этом сезоне. Ученики и учителя готовятся к новому учебному году, который "
    "начинается в сентябре.";

inline constexpr std::string_view kEnglish =
    "The United Kingdom is an island country in northwestern Europe, made up of England, Scotland, "
    "Wales and Northern Ireland. The capital is London, which is also the largest city in the country. "
    "English belongs to the West Germanic branch of languages and is written with the Latin alphabet. "
    "During the summer many tourists visit Edinburgh, Oxford and the coast of Cornwall. The climate is "
    "temperate and maritime, with mild summers and cool, wet winters. Agriculture is an important part "
    "of the rural economy, especially dairy farming, barley and sheep. Children start school at the age "
    "of four or five, and education is compulsory until the age of eighteen. In the cities there are "
    "many parks, markets and cafes where people meet their friends. British cooking is known for dishes "
    "such as fish and chips, roast beef, shepherd's pie and scones. Every year there are festivals of "
    "music, theatre and film. Citizens can contact the local council with any questions about documents "
    "and permits. The government has adopted a new decision to support young entrepreneurs and small "
    "businesses. The professor explained that the research would last three years and include more than "
    "a thousand participants. If you want to find out more, read the whole article on our website. On "
    "Sunday it will rain, and temperatures will be lower than usual. The library is open every day "
    "except Sunday, from eight in the morning until eight in the evening. He said that he would not come "
    "because he had to finish the work by Friday. She is very pleased with the results that her team "
    "achieved this season. Pupils and teachers are getting ready for the new school year, which starts "
    "in September.";

inline constexpr std::string_view kAlbanian =
    "Shqipëria është një vend në Evropën Juglindore, i vendosur në brigjet e detit Adriatik dhe Jon. "
    "Kryeqyteti është Tirana, e cila është edhe qyteti më i madh i vendit. Gjuha shqipe është një degë e "
    "veçantë e familjes indoevropiane dhe shkruhet me alfabetin latin. Alfabeti ka tridhjetë e gjashtë "
    "shkronja, ndër të cilat janë ë, ç, dh, gj, ll, nj, rr, sh, th, xh dhe zh. Gjatë verës shumë turistë "
    "vizitojnë Durrësin, Sarandën dhe Beratin. Klima është mesdhetare, me vera të nxehta dhe të thata dhe "
    "dimra të butë e me shi. Bujqësia është një degë e rëndësishme e ekonomisë, sidomos ullinjtë, rrushi "
    "dhe perimet. Fëmijët fillojnë shkollën në moshën gjashtë vjeç dhe arsimi është i detyrueshëm deri "
    "në fund të shkollës nëntëvjeçare. Në qytete ka shumë parqe, tregje dhe kafene ku njerëzit takohen "
    "me miqtë. Kuzhina shqiptare njihet për gatime si byreku, tava e kosit, fërgesa dhe bakllavaja. Çdo "
    "vit mbahen festivale të muzikës, teatrit dhe filmit. Qytetarët mund t'i drejtohen bashkisë për çdo "
    "pyetje që lidhet me dokumentet dhe lejet. Qeveria mori një vendim të ri për mbështetjen e "
    "sipërmarrësve të rinj dhe bizneseve të vogla. Profesori shpjegoi se hulumtimi do të zgjasë tre vjet "
    "dhe do të përfshijë më shumë se një mijë pjesëmarrës. Nëse dëshironi të mësoni më shumë, lexoni të "
    "gjithë artikullin në faqen tonë. Të dielën do të bjerë shi dhe temperaturat do të jenë më të ulëta "
    "se zakonisht. Biblioteka është e hapur çdo ditë përveç së dielës, nga ora tetë e mëngjesit deri në "
    "orën tetë të mbrëmjes. Ai tha se nuk do të vijë sepse duhet ta përfundojë punën deri të premten. "
    "Ajo është shumë e kënaqur me rezultatet që arriti ekipi i saj këtë sezon.";

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kSamples{{
    {"mk", kMacedonian},
    {"sr", kSerbian},
    {"bg", kBulgarian},
    {"ru", kRussian},
    {"en", kEnglish},
    {"sq", kAlbanian},
}};

}  // namespace corpus_forge::langid::bundled
