"""Published 43-node symmetric density rule (nodes and weights on (0,1))."""

TABLE2 = [
    (3.8153503841778930e-08, 1.9462166165433782e-07),
    (1.8621751229398742e-06, 5.6557228645853394e-06),
    (2.3548989111566051e-05, 5.0123980914007912e-05),
    (1.4796873542253231e-04, 2.3484191896467563e-04),
    (5.9719633529811916e-04, 7.3189687338231666e-04),
    (1.7776065804175705e-03, 1.7238717892356147e-03),
    (4.2473152693930051e-03, 3.3181618633886167e-03),
    (8.6062904061371317e-03, 5.4843557934027244e-03),
    (1.5348863951004616e-02, 8.0460517169448388e-03),
    (2.4742939762206897e-02, 1.0741992568943348e-02),
    (3.6794136418563730e-02, 1.3324899124821651e-02),
    (5.1299788260226145e-02, 1.5632319416985788e-02),
    (6.7944092105184303e-02, 1.7598001767457079e-02),
    (8.6382423526857308e-02, 1.9224720756886148e-02),
    (1.0629323929619865e-01, 2.0550906564542663e-02),
    (1.2740084223127754e-01, 2.1626845166204386e-02),
    (1.4948000254495675e-01, 2.2501767869303416e-02),
    (1.7235168105825832e-01, 2.3218324218440851e-02),
    (1.9587547846015377e-01, 2.3811106669646236e-02),
    (2.1994170091684220e-01, 2.4307093498802106e-02),
    (2.4446430088367060e-01, 2.4726814975746716e-02),
    (2.6937507294734536e-01, 2.5085627984821550e-02),
    (2.9461905048621601e-01, 2.5394814769833289e-02),
    (3.2015086713296453e-01, 2.5662404915729992e-02),
    (3.4593177859400515e-01, 2.5893662976614856e-02),
    (3.7192698736533930e-01, 2.6091208338375568e-02),
    (3.9810287487972756e-01, 2.6254650270947675e-02),
    (4.2442340488910107e-01, 2.6379218475411595e-02),
    (4.5084450818929106e-01, 2.6452938570694140e-02),
    (4.7730398807466573e-01, 2.6449899946836126e-02),
    (5.0370157776242630e-01, 2.6317157280117857e-02),
    (5.2986292621392794e-01, 2.5956236923454400e-02),
    (5.5549151318191370e-01, 2.5233135355892482e-02),
    (5.8023336057818919e-01, 2.4253858975533026e-02),
    (6.0420106522936246e-01, 2.3883208046443095e-02),
    (6.2845118361063135e-01, 2.4788564380040439e-02),
    (6.5391666500166423e-01, 2.6135655855085593e-02),
    (6.8067763680759019e-01, 2.7386023987669407e-02),
    (7.0883363435562430e-01, 2.9079584045104245e-02),
    (7.3935214962210505e-01, 3.2403729259281477e-02),
    (7.7501382927296592e-01, 3.9683359210637488e-02),
    (8.1983271443438077e-01, 5.0313579393503942e-02),
    (8.7653187131388799e-01, 6.3807406535572972e-02),
]
