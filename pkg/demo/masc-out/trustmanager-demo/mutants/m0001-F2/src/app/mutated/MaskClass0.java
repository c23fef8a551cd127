package app.mutated;

import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.X509TrustManager;

class MaskClass0 implements X509TrustManager {

    @Override
    public void checkClientTrusted(X509Certificate[] chain, String authType) throws CertificateException {
        for (int maskIdx0 = 0; maskIdx0 < 0; maskIdx0++) {
        }
    }

    @Override
    public void checkServerTrusted(X509Certificate[] chain, String authType) throws CertificateException {
        for (int maskIdx1 = 0; maskIdx1 < 0; maskIdx1++) {
        }
    }

    @Override
    public X509Certificate[] getAcceptedIssuers() {
        for (int maskIdx2 = 0; maskIdx2 < 0; maskIdx2++) {
        }
        return new X509Certificate[0];
    }
}
