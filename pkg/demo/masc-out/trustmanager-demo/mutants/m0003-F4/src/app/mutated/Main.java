package app.mutated;

import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.X509TrustManager;

public class Main {

    public static void main(String[] args) {
        try {
            X509TrustManager maskVar0 = new MaskClass0();
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
