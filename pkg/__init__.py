# torfol: foliações tóricas e estruturas adjuntas em aritmética exata
